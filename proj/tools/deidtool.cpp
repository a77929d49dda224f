#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deid/error.hpp"
#include "deid/eval.hpp"
#include "deid/hull.hpp"
#include "deid/phantom.hpp"
#include "deid/pipeline.hpp"
#include "deid/privacy.hpp"
#include "deid/render.hpp"
#include "deid/surface.hpp"
#include "deid/volume.hpp"

using namespace deid;

namespace {

std::string strip_vol(const std::string& path) {
  if (path.size() > 4 && path.compare(path.size() - 4, 4, ".vol") == 0) return path.substr(0, path.size() - 4);
  return path;
}

std::vector<DeidMethod> parse_methods(const std::vector<std::string>& names) {
  std::vector<DeidMethod> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  out << text << "\n";
}

std::optional<int> triangle_count(const std::string& s) {
  if (s == "all") return std::nullopt;
  return std::stoi(s);
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deidtool: privacy transform, de-identification and evaluation on VOL1 volumes"};
  app.require_subcommand(1);

  // surface
  auto* surf = app.add_subcommand("surface", "surface probability map Z");
  std::string s_in, s_out;
  SurfaceParams s_params;
  surf->add_option("--in", s_in, "input volume")->required();
  surf->add_option("--out", s_out, "output Z volume")->required();
  surf->add_option("--delta", s_params.delta, "binarization threshold");
  surf->add_option("--rotations", s_params.rotations, "number of random rotations K");
  surf->add_option("--seed", s_params.seed, "seed");

  // hull
  auto* hull = app.add_subcommand("hull", "convex hull mesh and voxelized hull mask");
  std::string h_in, h_mesh, h_mask, h_tri = "100";
  SurfaceParams h_params;
  hull->add_option("--in", h_in, "input volume")->required();
  hull->add_option("--out-mesh", h_mesh, "OFF mesh output");
  hull->add_option("--out-mask", h_mask, "VOL1 hull mask output");
  hull->add_option("--triangles", h_tri, "triangles used for clipping, or 'all'");
  hull->add_option("--delta", h_params.delta, "binarization threshold");
  hull->add_option("--rotations", h_params.rotations, "number of random rotations K");
  hull->add_option("--seed", h_params.seed, "seed");

  // deid
  auto* deid = app.add_subcommand("deid", "de-identify a scan");
  std::string d_method = "remodel", d_in, d_brain, d_out, d_gen, d_gamma_prefix;
  Seed d_seed = 0;
  bool d_emit_gamma = false;
  std::size_t d_pyr_min = 0;
  DeidParams d_params;
  deid->add_option("--method", d_method, "remodel|quickshear|skullstrip|black|original");
  deid->add_option("--in", d_in, "input scan")->required();
  deid->add_option("--brain", d_brain, "binary brain mask")->required();
  deid->add_option("--seed", d_seed, "seed");
  deid->add_option("--out", d_out, "output volume")->required();
  deid->add_flag("--emit-gamma", d_emit_gamma, "write the privacy transform next to the output (remodel)");
  deid->add_option("--gamma-prefix", d_gamma_prefix, "prefix for --emit-gamma files (default: output path)");
  deid->add_option("--pyramid-min-side", d_pyr_min, "also write the gamma pyramid down to this side");
  deid->add_option("--generator-output", d_gen, "externally generated head to composite");
  deid->add_option("--delta", d_params.transform.surface.delta, "binarization threshold");
  deid->add_option("--rotations", d_params.transform.surface.rotations, "number of random rotations K");
  deid->add_option("--pad", d_params.quickshear_pad, "quickshear pad in voxels");

  // phantom
  auto* phan = app.add_subcommand("phantom", "synthetic head phantom");
  Seed p_seed = 0;
  std::string p_scan, p_brain;
  PhantomParams p_params;
  phan->add_option("--seed", p_seed, "seed");
  phan->add_option("--side", p_params.side, "cube side");
  phan->add_flag("--vary-head-size", p_params.vary_head_size, "draw head size per identity");
  phan->add_option("--out-scan", p_scan, "scan output")->required();
  phan->add_option("--out-brain", p_brain, "brain mask output")->required();

  // render
  auto* rend = app.add_subcommand("render", "depth-shaded rendering as binary PGM");
  std::string r_in, r_out, r_view = "frontal";
  double r_delta = 0.2;
  rend->add_option("--in", r_in, "input volume")->required();
  rend->add_option("--out", r_out, "PGM output")->required();
  rend->add_option("--view", r_view, "frontal|left|right");
  rend->add_option("--delta", r_delta, "hit threshold");

  // eval-id
  auto* evid = app.add_subcommand("eval-id", "identification attack and rank retrieval");
  IdentificationConfig e_cfg;
  std::vector<std::string> e_methods{"original", "black", "skullstrip", "quickshear", "remodel"};
  std::string e_out = "-";
  evid->add_option("--methods", e_methods, "methods to evaluate")->delimiter(',');
  evid->add_option("--subjects", e_cfg.subjects, "number of phantom subjects");
  evid->add_option("--trials", e_cfg.trials, "number of five-option trials");
  evid->add_option("--options", e_cfg.options, "options per trial");
  evid->add_option("--seed", e_cfg.seed, "seed");
  evid->add_option("--side", e_cfg.side, "phantom side");
  evid->add_flag("--vary-head-size", e_cfg.vary_head_size, "vary head size across identities");
  evid->add_option("--out", e_out, "JSON report ('-' for stdout)");

  // eval-seg
  auto* evseg = app.add_subcommand("eval-seg", "segmentation impact table");
  SegmentationConfig g_cfg;
  std::vector<std::string> g_methods{"original", "black", "skullstrip", "quickshear", "remodel"};
  std::string g_out = "-";
  evseg->add_option("--methods", g_methods, "methods to evaluate")->delimiter(',');
  evseg->add_option("--subjects", g_cfg.subjects, "number of phantom subjects");
  evseg->add_option("--seed", g_cfg.seed, "seed");
  evseg->add_option("--side", g_cfg.side, "phantom side");
  evseg->add_option("--out", g_out, "JSON report ('-' for stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "stage timings on a phantom");
  std::size_t b_side = 64;
  int b_repeats = 3;
  Seed b_seed = 0;
  bench->add_option("--side", b_side, "phantom side");
  bench->add_option("--repeats", b_repeats, "repetitions per stage");
  bench->add_option("--seed", b_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*surf) {
      write_volume(surface_representation(read_volume(s_in), s_params), s_out);
    } else if (*hull) {
      const Volume x = read_volume(h_in);
      const Volume z = surface_representation(x, h_params);
      const auto pts = sample_surface_points(z, derive_seed(h_params.seed, 1), h_params.point_cap);
      const TriMesh mesh = convex_hull(pts);
      if (!h_mesh.empty()) {
        std::ofstream out(h_mesh);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + h_mesh);
        write_off(mesh, out);
      }
      if (!h_mask.empty()) {
        write_volume(voxelize_hull(mesh, x.side(), triangle_count(h_tri), derive_seed(h_params.seed, 2)), h_mask);
      }
      std::cout << "points " << pts.size() << " vertices " << mesh.vertices.size() << " triangles "
                << mesh.triangles.size() << "\n";
    } else if (*deid) {
      const Volume x = read_volume(d_in);
      const Volume b = read_volume(d_brain);
      if (!d_gen.empty()) d_params.generator_output = read_volume(d_gen);
      const DeidMethod m = parse_method(d_method);
      DeidResult res = deidentify_full(x, b, m, d_params, d_seed);
      write_volume(res.output, d_out);
      if ((d_emit_gamma || d_pyr_min > 0) && !res.gamma) {
        throw Error(ErrorCode::InvalidArgument, "--emit-gamma and --pyramid-min-side need --method remodel");
      }
      const std::string prefix = d_gamma_prefix.empty() ? strip_vol(d_out) + ".gamma" : d_gamma_prefix;
      if (d_emit_gamma) write_privacy_transform(*res.gamma, prefix);
      if (d_pyr_min > 0) write_pyramid(build_pyramid(*res.gamma, d_pyr_min, derive_seed(d_seed, 3)), prefix);
    } else if (*phan) {
      const Phantom ph = generate_phantom(p_seed, p_params);
      write_volume(ph.scan, p_scan);
      write_volume(ph.brain, p_brain);
    } else if (*rend) {
      const Rendering img = render_face(read_volume(r_in), r_delta, parse_view(r_view));
      std::ofstream out(r_out, std::ios::binary);
      if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + r_out);
      out << "P5\n" << img.width << " " << img.width << "\n255\n";
      for (float v : img.pixels) out.put(static_cast<char>(static_cast<unsigned char>(v * 255.0f + 0.5f)));
    } else if (*evid) {
      e_cfg.methods = parse_methods(e_methods);
      write_text(e_out, to_json(run_identification(e_cfg)));
    } else if (*evseg) {
      g_cfg.methods = parse_methods(g_methods);
      write_text(g_out, to_json(run_segmentation(g_cfg)));
    } else if (*bench) {
      PhantomParams pp;
      pp.side = b_side;
      const Phantom ph = generate_phantom(b_seed, pp);
      SurfaceParams sp;
      Volume z;
      std::vector<Point3> pts;
      TriMesh mesh;
      std::printf("%-14s %10s\n", "stage", "seconds");
      auto row = [&](const char* name, auto&& f) {
        double best = 1e300;
        for (int r = 0; r < b_repeats; ++r) best = std::min(best, seconds(f));
        std::printf("%-14s %10.4f\n", name, best);
      };
      row("surface", [&] { z = surface_representation(ph.scan, sp); });
      row("sample", [&] { pts = sample_surface_points(z, 1, sp.point_cap); });
      row("hull", [&] { mesh = convex_hull(pts); });
      row("voxelize", [&] { (void)voxelize_hull(mesh, b_side, 100, 2); });
      for (DeidMethod m : all_methods()) {
        const std::string name = "deid:" + std::string(to_string(m));
        row(name.c_str(), [&] { (void)deidentify(ph.scan, ph.brain, m, DeidParams{}, b_seed); });
      }
    }
  } catch (const Error& e) {
    // what() carries the code and, for format errors, the byte offset
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
