import numpy as np
import pytest

import deid_remodel as dr


@pytest.fixture(scope="module")
def phantom():
    return dr.generate_phantom(3, side=32)


def test_phantom_shapes(phantom):
    scan, brain = phantom
    assert scan.shape == (32, 32, 32)
    assert scan.dtype == np.float32
    assert set(np.unique(brain)) == {0.0, 1.0}
    again, _ = dr.generate_phantom(3, side=32)
    assert np.array_equal(scan, again)


def test_remodel_preserves_brain(phantom):
    scan, brain = phantom
    out, gamma = dr.deidentify(scan, brain, "remodel", seed=1, rotations=8)
    inside = brain == 1
    assert np.array_equal(out[inside], scan[inside])
    assert np.all(out[gamma["hull"] == 0] == 0)
    assert np.array_equal(gamma["brain"], brain)


def test_controls(phantom):
    scan, brain = phantom
    black, gamma = dr.deidentify(scan, brain, "black")
    assert gamma is None
    assert not black.any()
    orig, _ = dr.deidentify(scan, brain, "original")
    assert np.array_equal(orig, scan)


def test_generator_output_is_hull_gated(phantom):
    scan, brain = phantom
    g = np.full_like(scan, 0.5)
    out, gamma = dr.deidentify(scan, brain, "remodel", seed=1, rotations=8, generator_output=g)
    outside = (brain == 0) & (gamma["hull"] == 1)
    assert np.all(out[outside] == 0.5)
    assert np.all(out[gamma["hull"] == 0] == 0)


def test_pyramid_and_files(phantom, tmp_path):
    scan, brain = phantom
    gamma = dr.privacy_transform(scan, brain, rotations=8)
    levels = dr.build_pyramid(gamma, 8)
    assert [lv["hull"].shape[0] for lv in levels] == [8, 16, 32]
    assert dr.pyramid_level_count(128, 4) == 6
    prefix = str(tmp_path / "g")
    dr.write_gamma(gamma, prefix)
    back = dr.read_gamma(prefix)
    for key in ("hull", "brain", "brain_intensities"):
        assert np.array_equal(back[key], gamma[key])
    dr.write_volume(scan, str(tmp_path / "x.vol"))
    assert np.array_equal(dr.read_volume(str(tmp_path / "x.vol")), scan)


def test_intersection_map_first_hits():
    m = np.zeros((4, 4, 4), dtype=np.float32)
    m[1:3, 1:3, 1:3] = 1
    hits = dr.intersection_map(m, 0, -1)
    assert hits.sum() == 4
    assert np.all(hits[1, 1:3, 1:3] == 1)


def test_convex_hull_cube():
    pts = [(a, b, c) for a in (0, 5) for b in (0, 5) for c in (0, 5)] + [(2, 2, 2)]
    verts, tris = dr.convex_hull(pts)
    assert len(verts) == 8
    assert len(tris) == 12


def test_metrics_and_render(phantom):
    scan, brain = phantom
    assert dr.dice(brain, brain) == 1.0
    a = np.zeros((2, 2, 2), dtype=np.float32)
    b = np.zeros_like(a)
    a.flat[[0, 2]] = 1
    b.flat[[1, 2]] = 1
    assert dr.dice(a, b) == pytest.approx(0.5)
    assert dr.iou(a, b) == pytest.approx(1 / 3)
    img = dr.render_face(scan)
    assert img.shape == (32, 32)
    assert 0 <= img.min() and img.max() <= 1


def test_errors(phantom):
    scan, brain = phantom
    with pytest.raises(dr.DeidError):
        dr.deidentify(scan, brain[:16, :16, :16], "remodel")
    with pytest.raises(dr.DeidError):
        dr.deidentify(scan, brain, "deface")


def test_small_harness():
    rep = dr.run_identification(subjects=12, trials=20, side=32, methods=["original", "black"], rotations=8)
    rates = {m["method"]: m["rate"] for m in rep["methods"]}
    assert rates["original"] == 1.0
    seg = dr.run_segmentation(subjects=1, side=32, methods=["remodel"], rotations=8)
    assert all(row["dice"] == 1.0 for row in seg["table"] if row["region"] == "brain_restricted")
