#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "deid/error.hpp"
#include "deid/eval.hpp"
#include "deid/hull.hpp"

namespace py = pybind11;
using namespace deid;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

Volume to_volume(const FloatArray& a) {
  if (a.ndim() != 3) throw Error(ErrorCode::InvalidArgument, "expected a 3-d array");
  const Dims d{static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
               static_cast<std::size_t>(a.shape(2))};
  std::vector<float> data(a.data(), a.data() + d.count());
  return Volume(d, std::move(data));
}

FloatArray to_array(const Volume& v) {
  const auto& d = v.dims();
  FloatArray out({d.s0, d.s1, d.s2});
  std::memcpy(out.mutable_data(), v.data().data(), v.size() * sizeof(float));
  return out;
}

py::dict gamma_dict(const PrivacyTransform& g) {
  py::dict out;
  out["hull"] = to_array(g.hull);
  out["brain"] = to_array(g.brain);
  out["brain_intensities"] = to_array(g.brain_intensities);
  return out;
}

PrivacyTransform gamma_from(const py::dict& d) {
  return {to_volume(d["hull"].cast<FloatArray>()), to_volume(d["brain"].cast<FloatArray>()),
          to_volume(d["brain_intensities"].cast<FloatArray>())};
}

PrivacyTransformParams transform_params(int rotations, double delta, Seed seed, std::optional<int> triangles) {
  PrivacyTransformParams p;
  p.surface.rotations = rotations;
  p.surface.delta = delta;
  p.surface.seed = seed;
  p.hull_triangles = triangles;
  return p;
}

std::vector<DeidMethod> parse_methods(const std::vector<std::string>& names) {
  if (names.empty()) return all_methods();
  std::vector<DeidMethod> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Brain-preserving MRI de-identification core";

  static py::exception<Error> deid_error(m, "DeidError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = deid_error;
      PyErr_SetObject(err.ptr(), py::make_tuple(e.what(), std::string(to_string(e.code()))).ptr());
    }
  });

  m.def("read_volume", [](const std::string& path) { return to_array(read_volume(path)); }, py::arg("path"));
  m.def(
      "write_volume", [](const FloatArray& a, const std::string& path) { write_volume(to_volume(a), path); },
      py::arg("volume"), py::arg("path"));
  m.def(
      "binarize", [](const FloatArray& a, double delta) { return to_array(binarize(to_volume(a), delta)); },
      py::arg("volume"), py::arg("delta") = 0.2);
  m.def(
      "otsu_threshold", [](const FloatArray& a) { return otsu_threshold_nonzero(to_volume(a)); }, py::arg("volume"));

  m.def(
      "generate_phantom",
      [](Seed seed, std::size_t side, bool vary_head_size) {
        PhantomParams p;
        p.side = side;
        p.vary_head_size = vary_head_size;
        const Phantom ph = generate_phantom(seed, p);
        return py::make_tuple(to_array(ph.scan), to_array(ph.brain));
      },
      py::arg("seed"), py::arg("side") = 64, py::arg("vary_head_size") = false);

  m.def(
      "intersection_map",
      [](const FloatArray& mask, int axis, int direction) {
        return to_array(intersection_map(to_volume(mask), {axis, direction}));
      },
      py::arg("mask"), py::arg("axis"), py::arg("direction"));
  m.def(
      "surface_representation",
      [](const FloatArray& x, double delta, int rotations, Seed seed) {
        SurfaceParams p;
        p.delta = delta;
        p.rotations = rotations;
        p.seed = seed;
        return to_array(surface_representation(to_volume(x), p));
      },
      py::arg("volume"), py::arg("delta") = 0.2, py::arg("rotations") = 64, py::arg("seed") = 0);

  m.def(
      "convex_hull",
      [](const std::vector<std::array<std::int32_t, 3>>& pts) {
        std::vector<Point3> p;
        for (const auto& q : pts) p.push_back({q[0], q[1], q[2]});
        const TriMesh mesh = convex_hull(p);
        std::vector<std::array<std::int32_t, 3>> v;
        for (const auto& q : mesh.vertices) v.push_back({q.p0, q.p1, q.p2});
        return py::make_tuple(v, mesh.triangles);
      },
      py::arg("points"), "Returns (vertices, triangles).");

  m.def(
      "privacy_transform",
      [](const FloatArray& x, const FloatArray& brain, int rotations, double delta, Seed seed,
         std::optional<int> triangles) {
        return gamma_dict(
            build_privacy_transform(to_volume(x), to_volume(brain), transform_params(rotations, delta, seed, triangles)));
      },
      py::arg("volume"), py::arg("brain"), py::arg("rotations") = 64, py::arg("delta") = 0.2, py::arg("seed") = 0,
      py::arg("triangles") = 100);
  m.def(
      "build_pyramid",
      [](const py::dict& gamma, std::size_t min_side, Seed seed) {
        py::list out;
        for (const auto& level : build_pyramid(gamma_from(gamma), min_side, seed).levels) out.append(gamma_dict(level));
        return out;
      },
      py::arg("gamma"), py::arg("min_side"), py::arg("seed") = 0);
  m.def(
      "write_gamma", [](const py::dict& gamma, const std::string& prefix) { write_privacy_transform(gamma_from(gamma), prefix); },
      py::arg("gamma"), py::arg("prefix"));
  m.def(
      "read_gamma", [](const std::string& prefix) { return gamma_dict(read_privacy_transform(prefix)); },
      py::arg("prefix"));
  m.def("pyramid_level_count", &pyramid_level_count, py::arg("full_side"), py::arg("min_side"));

  m.def(
      "deidentify",
      [](const FloatArray& x, const FloatArray& brain, const std::string& method, Seed seed, int rotations,
         double delta, double pad, std::optional<FloatArray> generator_output) {
        DeidParams p;
        p.transform = transform_params(rotations, delta, 0, 100);
        p.quickshear_pad = pad;
        if (generator_output) p.generator_output = to_volume(*generator_output);
        const DeidResult r = deidentify_full(to_volume(x), to_volume(brain), parse_method(method), p, seed);
        return py::make_tuple(to_array(r.output), r.gamma ? py::object(gamma_dict(*r.gamma)) : py::none());
      },
      py::arg("volume"), py::arg("brain"), py::arg("method") = "remodel", py::arg("seed") = 0,
      py::arg("rotations") = 64, py::arg("delta") = 0.2, py::arg("pad") = 0.0, py::arg("generator_output") = py::none(),
      "Returns (output, gamma); gamma is None except for REMODEL.");

  m.def(
      "render_face",
      [](const FloatArray& x, double delta, const std::string& view) {
        const Rendering r = render_face(to_volume(x), delta, parse_view(view));
        FloatArray out({r.width, r.width});
        std::memcpy(out.mutable_data(), r.pixels.data(), r.pixels.size() * sizeof(float));
        return out;
      },
      py::arg("volume"), py::arg("delta") = 0.2, py::arg("view") = "frontal");
  m.def(
      "dice", [](const FloatArray& a, const FloatArray& b) { return dice(to_volume(a), to_volume(b)); }, py::arg("a"),
      py::arg("b"));
  m.def(
      "iou", [](const FloatArray& a, const FloatArray& b) { return iou(to_volume(a), to_volume(b)); }, py::arg("a"),
      py::arg("b"));

  m.def(
      "run_identification_json",
      [](std::size_t subjects, std::size_t trials, std::size_t options, std::size_t side, Seed seed,
         const std::vector<std::string>& methods, int rotations) {
        IdentificationConfig c;
        c.subjects = subjects;
        c.trials = trials;
        c.options = options;
        c.side = side;
        c.seed = seed;
        c.methods = parse_methods(methods);
        c.attack.deid.transform.surface.rotations = rotations;
        py::gil_scoped_release release;
        return to_json(run_identification(c));
      },
      py::arg("subjects") = 100, py::arg("trials") = 500, py::arg("options") = 5, py::arg("side") = 64,
      py::arg("seed") = 0, py::arg("methods") = std::vector<std::string>{}, py::arg("rotations") = 64);
  m.def(
      "run_segmentation_json",
      [](std::size_t subjects, std::size_t side, Seed seed, const std::vector<std::string>& methods, int rotations) {
        SegmentationConfig c;
        c.subjects = subjects;
        c.side = side;
        c.seed = seed;
        c.methods = parse_methods(methods);
        c.deid.transform.surface.rotations = rotations;
        py::gil_scoped_release release;
        return to_json(run_segmentation(c));
      },
      py::arg("subjects") = 10, py::arg("side") = 64, py::arg("seed") = 0,
      py::arg("methods") = std::vector<std::string>{}, py::arg("rotations") = 64);
}
