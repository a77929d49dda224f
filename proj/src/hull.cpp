#include "deid/hull.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "deid/error.hpp"

namespace deid {

namespace {

using i64 = std::int64_t;

// Keeps every orientation determinant below 2^55.
constexpr i64 kCoordLimit = 1 << 16;

struct V3 {
  i64 x = 0, y = 0, z = 0;
  i64 operator[](int a) const { return a == 0 ? x : (a == 1 ? y : z); }
  friend bool operator==(const V3&, const V3&) = default;
};

V3 operator-(const V3& a, const V3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
V3 cross(const V3& a, const V3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
i64 dot(const V3& a, const V3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
bool is_zero(const V3& v) { return v.x == 0 && v.y == 0 && v.z == 0; }

// Positive when d lies on the side of plane (a, b, c) that (b-a) x (c-a) points to.
i64 orient(const V3& a, const V3& b, const V3& c, const V3& d) { return dot(cross(b - a, c - a), d - a); }

V3 to_v3(const Point3& p) { return {p.p0, p.p1, p.p2}; }

std::vector<V3> dedup_points(std::span<const Point3> points) {
  std::vector<Point3> sorted(points.begin(), points.end());
  for (const Point3& p : sorted) {
    for (int a = 0; a < 3; ++a) {
      if (p[a] < -kCoordLimit || p[a] > kCoordLimit) {
        throw Error(ErrorCode::InvalidArgument, "hull coordinate outside +-65536");
      }
    }
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<V3> out;
  out.reserve(sorted.size());
  for (const Point3& p : sorted) out.push_back(to_v3(p));
  return out;
}

// Affine dimension (0..3) of the indexed points, capped at 3.
int affine_dimension(const std::vector<V3>& pts, std::span<const int> ids, V3* plane_normal = nullptr) {
  if (ids.empty()) return -1;
  const V3& a = pts[ids[0]];
  int b = -1;
  for (int id : ids) {
    if (!(pts[id] == a)) { b = id; break; }
  }
  if (b < 0) return 0;
  V3 n{};
  int c = -1;
  for (int id : ids) {
    n = cross(pts[b] - a, pts[id] - a);
    if (!is_zero(n)) { c = id; break; }
  }
  if (c < 0) return 1;
  for (int id : ids) {
    if (dot(n, pts[id] - a) != 0) return 3;
  }
  if (plane_normal) *plane_normal = n;
  return 2;
}

// Strict 2D hull (no collinear points) of coplanar points, counter-clockwise
// when viewed from the tip of `normal`. Collinear input yields the two
// endpoints.
std::vector<int> planar_hull(const std::vector<V3>& pts, std::vector<int> ids, const V3& normal) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() <= 1) return ids;

  int drop = 0;
  for (int a = 1; a < 3; ++a) {
    if (std::llabs(normal[a]) > std::llabs(normal[drop])) drop = a;
  }
  const int ua = (drop + 1) % 3, va = (drop + 2) % 3;
  auto u = [&](int id) { return pts[id][ua]; };
  auto v = [&](int id) { return pts[id][va]; };
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return u(a) != u(b) ? u(a) < u(b) : v(a) < v(b); });
  auto turn = [&](int o, int a, int b) {
    return (u(a) - u(o)) * (v(b) - v(o)) - (v(a) - v(o)) * (u(b) - u(o));
  };

  std::vector<int> hull;
  hull.reserve(2 * ids.size());
  for (int id : ids) {
    while (hull.size() >= 2 && turn(hull[hull.size() - 2], hull.back(), id) <= 0) hull.pop_back();
    hull.push_back(id);
  }
  const std::size_t lower = hull.size() + 1;
  for (auto it = ids.rbegin() + 1; it != ids.rend(); ++it) {
    while (hull.size() >= lower && turn(hull[hull.size() - 2], hull.back(), *it) <= 0) hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();
  // (u, v) = cyclic successors of the dropped axis, so CCW in (u, v) is CCW
  // about +e_drop.
  if (normal[drop] < 0) std::reverse(hull.begin(), hull.end());
  return hull;
}

bool on_line(const std::vector<V3>& pts, int p, int q, int s) {
  return is_zero(cross(pts[q] - pts[p], pts[s] - pts[p]));
}

// Candidate oracle scanning a flat list of points.
class ScanFinder {
 public:
  ScanFinder(const std::vector<V3>& pts, std::vector<int> ids) : pts_(pts), ids_(std::move(ids)) {}

  const std::vector<int>& candidates() const { return ids_; }

  // Point r with orient(p, q, r, s) <= 0 for every candidate s.
  int best(int p, int q) {
    int r = -1;
    for (int s : ids_) {
      if (s == p || s == q || on_line(pts_, p, q, s)) continue;
      if (r < 0 || orient(pts_[p], pts_[q], pts_[r], pts_[s]) > 0) r = s;
    }
    return r;
  }

  void plateau(int p, int q, int r, std::vector<int>& out) {
    for (int s : ids_) {
      if (orient(pts_[p], pts_[q], pts_[r], pts_[s]) == 0) out.push_back(s);
    }
  }

 private:
  const std::vector<V3>& pts_;
  std::vector<int> ids_;
};

// Sub-hull of one group: its extreme points and their edge graph.
struct SubHull {
  std::vector<int> verts;
  std::vector<std::vector<int>> adj;  // local indices
};

std::optional<std::vector<std::vector<int>>> wrap_facets(const std::vector<V3>& pts, auto& finder,
                                                         std::size_t budget);

SubHull build_subhull(const std::vector<V3>& pts, std::vector<int> ids) {
  SubHull h;
  V3 n{};
  const int dim = affine_dimension(pts, ids, &n);
  std::vector<std::vector<int>> cycles;
  if (dim == 0) {
    h.verts = {ids[0]};
    h.adj = {{}};
    return h;
  }
  if (dim == 1) {
    auto [lo, hi] = std::minmax_element(ids.begin(), ids.end(), [&](int a, int b) {
      return std::tie(pts[a].x, pts[a].y, pts[a].z) < std::tie(pts[b].x, pts[b].y, pts[b].z);
    });
    h.verts = {*lo, *hi};
    h.adj = {{1}, {0}};
    return h;
  }
  if (dim == 2) {
    cycles.push_back(planar_hull(pts, ids, n));
  } else {
    ScanFinder finder(pts, ids);
    cycles = *wrap_facets(pts, finder, std::numeric_limits<std::size_t>::max());
  }

  std::unordered_map<int, int> local;
  for (const auto& c : cycles) {
    for (int id : c) {
      if (local.emplace(id, static_cast<int>(h.verts.size())).second) h.verts.push_back(id);
    }
  }
  std::vector<std::unordered_set<int>> nb(h.verts.size());
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int a = local[c[i]], b = local[c[(i + 1) % c.size()]];
      nb[a].insert(b);
      nb[b].insert(a);
    }
  }
  h.adj.resize(h.verts.size());
  for (std::size_t i = 0; i < nb.size(); ++i) {
    h.adj[i].assign(nb[i].begin(), nb[i].end());
    std::sort(h.adj[i].begin(), h.adj[i].end());
  }
  return h;
}

// Candidate oracle over sub-hulls. On a convex polytope a vertex that no
// neighbor beats in wrap angle is the global maximum, so each sub-hull is
// queried by walking its edge graph.
class SubHullFinder {
 public:
  SubHullFinder(const std::vector<V3>& pts, std::vector<SubHull> hulls) : pts_(pts), hulls_(std::move(hulls)) {
    for (const auto& h : hulls_) all_.insert(all_.end(), h.verts.begin(), h.verts.end());
    best_.resize(hulls_.size(), -1);
  }

  const std::vector<int>& candidates() const { return all_; }

  int best(int p, int q) {
    int r = -1;
    for (std::size_t g = 0; g < hulls_.size(); ++g) {
      best_[g] = climb(hulls_[g], p, q);
      if (best_[g] < 0) continue;
      const int cand = hulls_[g].verts[static_cast<std::size_t>(best_[g])];
      if (r < 0 || orient(pts_[p], pts_[q], pts_[r], pts_[cand]) > 0) r = cand;
    }
    return r;
  }

  // Must follow best(p, q) with the r it returned.
  void plateau(int p, int q, int r, std::vector<int>& out) {
    for (std::size_t g = 0; g < hulls_.size(); ++g) {
      if (best_[g] < 0) continue;
      const SubHull& h = hulls_[g];
      auto on_plane = [&](int local) {
        return orient(pts_[p], pts_[q], pts_[r], pts_[h.verts[static_cast<std::size_t>(local)]]) == 0;
      };
      if (!on_plane(best_[g])) continue;
      std::vector<char> seen(h.verts.size(), 0);
      std::vector<int> stack{best_[g]};
      seen[static_cast<std::size_t>(best_[g])] = 1;
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        out.push_back(h.verts[static_cast<std::size_t>(cur)]);
        for (int nb : h.adj[static_cast<std::size_t>(cur)]) {
          if (!seen[static_cast<std::size_t>(nb)] && on_plane(nb)) {
            seen[static_cast<std::size_t>(nb)] = 1;
            stack.push_back(nb);
          }
        }
      }
    }
  }

 private:
  int climb(const SubHull& h, int p, int q) const {
    int cur = -1;
    for (std::size_t i = 0; i < h.verts.size(); ++i) {
      const int id = h.verts[i];
      if (id != p && id != q && !on_line(pts_, p, q, id)) {
        cur = static_cast<int>(i);
        break;
      }
    }
    if (cur < 0) return -1;
    for (bool moved = true; moved;) {
      moved = false;
      const V3& c = pts_[h.verts[static_cast<std::size_t>(cur)]];
      for (int nb : h.adj[static_cast<std::size_t>(cur)]) {
        const int id = h.verts[static_cast<std::size_t>(nb)];
        if (id == p || id == q || on_line(pts_, p, q, id)) continue;
        if (orient(pts_[p], pts_[q], c, pts_[id]) > 0) {
          cur = nb;
          moved = true;
          break;
        }
      }
    }
    return cur;
  }

  const std::vector<V3>& pts_;
  std::vector<SubHull> hulls_;
  std::vector<int> all_;
  std::vector<int> best_;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Gift wrapping over polygonal facets. Returns facet polygons (CCW about the
// outward normal) or nullopt once more than `budget` facets were produced.
// Requires a full-dimensional candidate set.
std::optional<std::vector<std::vector<int>>> wrap_facets(const std::vector<V3>& pts, auto& finder,
                                                         std::size_t budget) {
  const auto& cands = finder.candidates();
  const int p0 = *std::min_element(cands.begin(), cands.end(), [&](int a, int b) {
    return std::tie(pts[a].x, pts[a].y, pts[a].z) < std::tie(pts[b].x, pts[b].y, pts[b].z);
  });

  // Supporting plane through the vertical line at the lexicographic minimum.
  const V3 up{pts[p0].x, pts[p0].y, pts[p0].z + 1};
  int r = -1;
  for (int s : cands) {
    if (pts[s].x == pts[p0].x && pts[s].y == pts[p0].y) continue;
    if (r < 0 || orient(pts[p0], up, pts[r], pts[s]) > 0) r = s;
  }
  if (r < 0) throw Error(ErrorCode::DegenerateInput, "points are collinear");
  const V3 n0 = cross(up - pts[p0], pts[r] - pts[p0]);
  std::vector<int> support;
  for (int s : cands) {
    if (dot(n0, pts[s] - pts[p0]) == 0) support.push_back(s);
  }
  const auto first = planar_hull(pts, support, n0);
  const auto at = std::find(first.begin(), first.end(), p0);
  const int next = first[static_cast<std::size_t>((at - first.begin() + 1)) % first.size()];

  std::vector<std::vector<int>> facets;
  std::unordered_map<std::uint64_t, int> owner;
  // (a, b): some facet has edge a -> b; its neighbor has b -> a.
  std::deque<std::pair<int, int>> pending{{p0, next}};
  while (!pending.empty()) {
    const auto [a, b] = pending.front();
    pending.pop_front();
    if (owner.count(edge_key(b, a))) continue;

    const int apex = finder.best(b, a);
    if (apex < 0) throw Error(ErrorCode::DegenerateInput, "points are collinear");
    std::vector<int> coplanar{a, b};
    finder.plateau(b, a, apex, coplanar);
    const V3 normal = cross(pts[a] - pts[b], pts[apex] - pts[b]);
    auto poly = planar_hull(pts, std::move(coplanar), normal);

    const int id = static_cast<int>(facets.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const int u = poly[i], v = poly[(i + 1) % poly.size()];
      if (!owner.emplace(edge_key(u, v), id).second) {
        throw std::logic_error("convex_hull: directed edge claimed by two facets");
      }
      pending.emplace_back(u, v);
    }
    facets.push_back(std::move(poly));
    if (facets.size() > budget) return std::nullopt;
  }
  return facets;
}

}  // namespace

TriMesh convex_hull(std::span<const Point3> points) {
  if (points.size() < 4) throw Error(ErrorCode::TooFewPoints, "convex hull needs at least 4 points");
  const std::vector<V3> pts = dedup_points(points);
  const int n = static_cast<int>(pts.size());
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  if (n < 4 || affine_dimension(pts, all) < 3) {
    throw Error(ErrorCode::DegenerateInput, "points are coplanar");
  }

  std::vector<std::vector<int>> facets;
  for (int t = 1;; ++t) {
    const std::size_t m = t >= 5 ? static_cast<std::size_t>(n)
                                 : std::min<std::size_t>(static_cast<std::size_t>(n), std::size_t{1} << (1 << t));
    if (m >= static_cast<std::size_t>(n)) {
      ScanFinder finder(pts, all);
      facets = *wrap_facets(pts, finder, std::numeric_limits<std::size_t>::max());
      break;
    }
    std::vector<SubHull> subhulls;
    for (std::size_t start = 0; start < static_cast<std::size_t>(n); start += m) {
      const std::size_t end = std::min(start + m, static_cast<std::size_t>(n));
      subhulls.push_back(build_subhull(pts, std::vector<int>(all.begin() + static_cast<long>(start),
                                                             all.begin() + static_cast<long>(end))));
    }
    SubHullFinder finder(pts, std::move(subhulls));
    if (auto wrapped = wrap_facets(pts, finder, 2 * m - 4)) {
      facets = std::move(*wrapped);
      break;
    }
  }

  TriMesh mesh;
  std::vector<int> ids;
  for (const auto& f : facets) ids.insert(ids.end(), f.begin(), f.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<int, std::uint32_t> index;
  for (int id : ids) {
    index[id] = static_cast<std::uint32_t>(mesh.vertices.size());
    const V3& p = pts[static_cast<std::size_t>(id)];
    mesh.vertices.push_back({static_cast<std::int32_t>(p.x), static_cast<std::int32_t>(p.y),
                             static_cast<std::int32_t>(p.z)});
    mesh.centroid[0] += static_cast<double>(p.x);
    mesh.centroid[1] += static_cast<double>(p.y);
    mesh.centroid[2] += static_cast<double>(p.z);
  }
  for (double& c : mesh.centroid) c /= static_cast<double>(mesh.vertices.size());
  for (const auto& f : facets) {
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
      mesh.triangles.push_back({index[f[0]], index[f[i]], index[f[i + 1]]});
    }
  }
  return mesh;
}

std::vector<Point3> brute_force_hull(std::span<const Point3> points) {
  if (points.size() < 4) throw Error(ErrorCode::TooFewPoints, "need at least 4 points");
  if (points.size() > 60) throw Error(ErrorCode::InvalidArgument, "brute force oracle is limited to 60 points");
  const std::vector<V3> p = dedup_points(points);
  const std::size_t n = p.size();

  // 2D membership of q in the closed triangle (a, b, c) of a plane with
  // normal nrm, degenerate triangles included.
  auto in_triangle = [](const V3& nrm, const V3& q, const V3& a, const V3& b, const V3& c) {
    const i64 s1 = dot(nrm, cross(b - a, q - a));
    const i64 s2 = dot(nrm, cross(c - b, q - b));
    const i64 s3 = dot(nrm, cross(a - c, q - c));
    const i64 area = dot(nrm, cross(b - a, c - a));
    if (area != 0) {
      return (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
    }
    // Degenerate: q on one of the three segments.
    auto on_segment = [](const V3& u, const V3& v, const V3& w) {
      if (is_zero(v - u)) return is_zero(w - u);
      if (!is_zero(cross(v - u, w - u))) return false;
      return dot(w - u, v - u) >= 0 && dot(w - v, u - v) >= 0;
    };
    return on_segment(a, b, q) || on_segment(b, c, q) || on_segment(a, c, q);
  };

  std::vector<char> extreme(n, 0);
  bool full_dim = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const V3 nrm = cross(p[j] - p[i], p[k] - p[i]);
        if (is_zero(nrm)) continue;
        bool pos = false, neg = false;
        std::vector<std::size_t> face;
        for (std::size_t s = 0; s < n; ++s) {
          const i64 d = dot(nrm, p[s] - p[i]);
          pos |= d > 0;
          neg |= d < 0;
          if (d == 0) face.push_back(s);
        }
        if (pos || neg) full_dim = true;
        if (pos && neg) continue;
        for (std::size_t q : face) {
          if (extreme[q]) continue;
          bool covered = false;
          for (std::size_t a = 0; a < face.size() && !covered; ++a) {
            for (std::size_t b = a; b < face.size() && !covered; ++b) {
              for (std::size_t c = b; c < face.size() && !covered; ++c) {
                if (face[a] == q || face[b] == q || face[c] == q) continue;
                covered = in_triangle(nrm, p[q], p[face[a]], p[face[b]], p[face[c]]);
              }
            }
          }
          if (!covered) extreme[q] = 1;
        }
      }
    }
  }
  if (!full_dim) throw Error(ErrorCode::DegenerateInput, "points are coplanar");

  std::vector<Point3> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (extreme[s]) {
      out.push_back({static_cast<std::int32_t>(p[s].x), static_cast<std::int32_t>(p[s].y),
                     static_cast<std::int32_t>(p[s].z)});
    }
  }
  return out;
}

bool TriMesh::is_valid(double side) const {
  const double tol = 1e-6 * side;
  std::vector<std::array<double, 4>> planes;  // unit normal + offset
  for (const auto& t : triangles) {
    for (auto i : t) {
      if (i >= vertices.size()) return false;
    }
    const V3 a = to_v3(vertices[t[0]]), b = to_v3(vertices[t[1]]), c = to_v3(vertices[t[2]]);
    const V3 nrm = cross(b - a, c - a);
    if (is_zero(nrm)) return false;
    const double len = std::sqrt(static_cast<double>(dot(nrm, nrm)));
    const double ux = static_cast<double>(nrm.x) / len, uy = static_cast<double>(nrm.y) / len,
                 uz = static_cast<double>(nrm.z) / len;
    const double outward = ux * (static_cast<double>(a.x) - centroid[0]) +
                           uy * (static_cast<double>(a.y) - centroid[1]) +
                           uz * (static_cast<double>(a.z) - centroid[2]);
    if (!(outward > 0.0)) return false;
    planes.push_back({ux, uy, uz, ux * static_cast<double>(a.x) + uy * static_cast<double>(a.y) +
                                      uz * static_cast<double>(a.z)});
  }
  for (const auto& pl : planes) {
    for (const auto& v : vertices) {
      if (pl[0] * v.p0 + pl[1] * v.p1 + pl[2] * v.p2 - pl[3] > tol) return false;
    }
  }
  return true;
}

Volume voxelize_hull(const TriMesh& mesh, std::size_t side, std::optional<int> n_triangles, Seed seed) {
  if (n_triangles && *n_triangles <= 0) throw Error(ErrorCode::InvalidCount, "n_triangles must be positive");
  if (side == 0) throw Error(ErrorCode::InvalidArgument, "side must be positive");
  if (mesh.triangles.empty()) throw Error(ErrorCode::InvalidArgument, "mesh has no triangles");
  const auto hi_coord = static_cast<std::int32_t>(side - 1);
  for (const Point3& v : mesh.vertices) {
    for (int a = 0; a < 3; ++a) {
      if (v[a] < 0 || v[a] > hi_coord) throw Error(ErrorCode::InvalidArgument, "mesh does not fit in [0, S-1]^3");
    }
  }
  for (const auto& t : mesh.triangles) {
    for (auto i : t) {
      if (i >= mesh.vertices.size()) throw Error(ErrorCode::InvalidArgument, "triangle index out of range");
    }
  }

  std::vector<std::size_t> chosen(mesh.triangles.size());
  std::iota(chosen.begin(), chosen.end(), 0);
  if (n_triangles && static_cast<std::size_t>(*n_triangles) < chosen.size()) {
    const auto want = static_cast<std::size_t>(*n_triangles);
    SeedStream stream(seed);
    for (std::size_t i = 0; i < want; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(stream.below(chosen.size() - i));
      std::swap(chosen[i], chosen[j]);
    }
    chosen.resize(want);
    std::sort(chosen.begin(), chosen.end());
  }

  // Integer plane n . k <= offset (+ tolerance), n oriented away from the centroid.
  struct Plane {
    i64 n0, n1, n2, offset;
    double slack;
  };
  std::vector<Plane> planes;
  planes.reserve(chosen.size());
  for (std::size_t ti : chosen) {
    const auto& t = mesh.triangles[ti];
    const V3 a = to_v3(mesh.vertices[t[0]]), b = to_v3(mesh.vertices[t[1]]), c = to_v3(mesh.vertices[t[2]]);
    V3 nrm = cross(b - a, c - a);
    if (is_zero(nrm)) continue;
    const double away = static_cast<double>(nrm.x) * (static_cast<double>(a.x) - mesh.centroid[0]) +
                        static_cast<double>(nrm.y) * (static_cast<double>(a.y) - mesh.centroid[1]) +
                        static_cast<double>(nrm.z) * (static_cast<double>(a.z) - mesh.centroid[2]);
    if (away < 0) nrm = {-nrm.x, -nrm.y, -nrm.z};
    const double len = std::sqrt(static_cast<double>(dot(nrm, nrm)));
    planes.push_back({nrm.x, nrm.y, nrm.z, dot(nrm, a), 1e-6 * static_cast<double>(side) * len});
  }

  const auto s = static_cast<long>(side);
  Volume out({side, side, side});
  auto dst = out.data();
  for (long k0 = 0; k0 < s; ++k0) {
    for (long k1 = 0; k1 < s; ++k1) {
      auto inside = [&](long k2) {
        for (const Plane& p : planes) {
          const i64 v = p.n0 * k0 + p.n1 * k1 + p.n2 * k2 - p.offset;
          if (static_cast<double>(v) > p.slack) return false;
        }
        return true;
      };
      // The feasible k2 set of a row is an interval; estimate it, then snap
      // both ends with the exact per-voxel predicate.
      double lo = 0.0, hi = static_cast<double>(s - 1);
      bool empty = false;
      for (const Plane& p : planes) {
        const double rest = static_cast<double>(p.offset - p.n0 * k0 - p.n1 * k1) + p.slack;
        if (p.n2 == 0) {
          if (rest < 0.0) { empty = true; break; }
        } else if (p.n2 > 0) {
          hi = std::min(hi, rest / static_cast<double>(p.n2));
        } else {
          lo = std::max(lo, rest / static_cast<double>(p.n2));
        }
      }
      if (empty || hi < lo - 1.0) continue;
      long a = std::clamp(static_cast<long>(std::ceil(lo)), 0L, s - 1);
      long b = std::clamp(static_cast<long>(std::floor(hi)), 0L, s - 1);
      long seed_k = -1;
      for (long cand : {(a + b) / 2, a, b, a - 1, b + 1}) {
        if (cand >= 0 && cand < s && inside(cand)) { seed_k = cand; break; }
      }
      if (seed_k < 0) continue;
      a = std::min(a, seed_k);
      b = std::max(b, seed_k);
      if (inside(a)) {
        while (a > 0 && inside(a - 1)) --a;
      } else {
        while (!inside(a)) ++a;
      }
      if (inside(b)) {
        while (b < s - 1 && inside(b + 1)) ++b;
      } else {
        while (!inside(b)) --b;
      }
      const std::size_t row = (static_cast<std::size_t>(k0) * side + static_cast<std::size_t>(k1)) * side;
      for (long k2 = a; k2 <= b; ++k2) dst[row + static_cast<std::size_t>(k2)] = 1.0f;
    }
  }
  return out;
}

void write_off(const TriMesh& mesh, std::ostream& out) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  for (const Point3& v : mesh.vertices) out << v.p0 << ' ' << v.p1 << ' ' << v.p2 << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace deid
