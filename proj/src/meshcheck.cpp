#include "helicoid/meshcheck.hpp"

#include "helicoid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace helicoid {

// ---------------------------------------------------------------------------
// Topology
// ---------------------------------------------------------------------------

Topology euler_genus(const TriMesh& mesh) {
  mesh.validate();
  const auto edges = build_edges(mesh);
  const std::size_t nv = mesh.vertices.size();
  std::vector<bool> used(nv, false);
  for (const auto& t : mesh.triangles)
    for (int v : t) used[v] = true;

  Topology top{};
  top.vertices = static_cast<int>(std::count(used.begin(), used.end(), true));
  top.edges = static_cast<int>(edges.size());
  top.faces = static_cast<int>(mesh.triangles.size());
  top.euler = top.vertices - top.edges + top.faces;

  // boundary loops: components of the boundary-edge graph
  std::vector<int> root(nv);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  std::vector<bool> on_boundary(nv, false);
  for (const auto& e : edges)
    if (e.boundary()) {
      on_boundary[e.a] = on_boundary[e.b] = true;
      root[find(e.a)] = find(e.b);
    }
  for (std::size_t v = 0; v < nv; ++v)
    if (on_boundary[v] && find(static_cast<int>(v)) == static_cast<int>(v)) ++top.boundary_loops;

  // components and orientability by propagation across shared edges
  const std::size_t nf = mesh.triangles.size();
  std::vector<int> flip(nf, 0);  // +1 / -1 once visited
  auto directed = [&](int f, int a, int b) {
    const auto& t = mesh.triangles[f];
    for (int k = 0; k < 3; ++k)
      if (t[k] == a && t[(k + 1) % 3] == b) return true;
    return false;
  };
  std::vector<std::vector<std::pair<int, int>>> adj(nf);  // (neighbour face, edge index)
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (edges[e].face_count == 2) {
      adj[edges[e].faces[0]].push_back({edges[e].faces[1], static_cast<int>(e)});
      adj[edges[e].faces[1]].push_back({edges[e].faces[0], static_cast<int>(e)});
    }
  top.orientable = true;
  for (std::size_t f0 = 0; f0 < nf; ++f0) {
    if (flip[f0] != 0) continue;
    ++top.components;
    flip[f0] = 1;
    std::queue<int> q;
    q.push(static_cast<int>(f0));
    while (!q.empty()) {
      const int f = q.front();
      q.pop();
      for (const auto& [g, e] : adj[f]) {
        // consistent orientation traverses the shared edge in opposite directions
        const bool df = directed(f, edges[e].a, edges[e].b);
        const bool dg = directed(g, edges[e].a, edges[e].b);
        const int want = df != dg ? flip[f] : -flip[f];
        if (flip[g] == 0) {
          flip[g] = want;
          q.push(g);
        } else if (flip[g] != want) {
          top.orientable = false;
        }
      }
    }
  }
  if (top.orientable && top.components == 1) {
    const int twice = 2 - top.euler - top.boundary_loops;
    if (twice >= 0 && twice % 2 == 0) top.genus = twice / 2;
  }
  return top;
}

// ---------------------------------------------------------------------------
// F = θ - z
// ---------------------------------------------------------------------------

FRange f_range(const TriMesh& mesh) {
  if (!mesh.theta) throw ValidationError("theta", "mesh has no theta field");
  if (mesh.vertices.empty()) throw ValidationError("mesh", "empty mesh");
  FRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
    const double F = (*mesh.theta)[k] - mesh.vertices[k].z();
    r.a = std::min(r.a, F);
    r.b = std::max(r.b, F);
  }
  return r;
}

const char* to_string(EndClass c) {
  switch (c) {
    case EndClass::z_plus: return "Z+";
    case EndClass::z_minus: return "Z-";
    case EndClass::boundary: return "boundary";
  }
  return "?";
}

std::vector<LevelPolyline> level_set(const TriMesh& mesh, double alpha) {
  if (!mesh.theta) throw ValidationError("theta", "mesh has no theta field");
  mesh.validate();
  const auto edges = build_edges(mesh);
  const std::size_t nv = mesh.vertices.size();
  std::vector<double> s(nv);
  for (std::size_t k = 0; k < nv; ++k) s[k] = (*mesh.theta)[k] - mesh.vertices[k].z() - alpha;

  // one crossing node per sign-changing edge
  std::map<std::pair<int, int>, int> node_of;
  std::vector<Vec3> nodes;
  std::vector<bool> node_on_boundary;
  for (const auto& e : edges) {
    if ((s[e.a] >= 0.0) == (s[e.b] >= 0.0)) continue;
    const double t = s[e.a] / (s[e.a] - s[e.b]);
    node_of[{e.a, e.b}] = static_cast<int>(nodes.size());
    nodes.push_back(mesh.vertices[e.a] + t * (mesh.vertices[e.b] - mesh.vertices[e.a]));
    node_on_boundary.push_back(e.boundary());
  }
  std::vector<std::vector<int>> link(nodes.size());
  for (const auto& tri : mesh.triangles) {
    int hit[3], n = 0;
    for (int k = 0; k < 3; ++k) {
      const auto key = std::minmax(tri[k], tri[(k + 1) % 3]);
      const auto it = node_of.find(key);
      if (it != node_of.end()) hit[n++] = it->second;
    }
    if (n == 2) {
      link[hit[0]].push_back(hit[1]);
      link[hit[1]].push_back(hit[0]);
    }
  }

  const double delta = 2.0 * mesh.median_edge_length();
  auto classify = [&](const Vec3& p) {
    if (std::hypot(p.x(), p.y()) > delta) return EndClass::boundary;
    return p.z() > 0.0 ? EndClass::z_plus : EndClass::z_minus;
  };

  std::vector<LevelPolyline> out;
  std::vector<bool> seen(nodes.size(), false);
  auto trace = [&](int start) {
    LevelPolyline pl;
    int prev = -1, cur = start;
    for (;;) {
      seen[cur] = true;
      pl.points.push_back(nodes[cur]);
      int next = -1;
      for (int nb : link[cur])
        if (nb != prev && !seen[nb]) {
          next = nb;
          break;
        }
      if (next < 0) {
        pl.closed = link[cur].size() == 2 && std::find(link[cur].begin(), link[cur].end(), start) != link[cur].end() &&
                    pl.points.size() > 2;
        break;
      }
      prev = cur;
      cur = next;
    }
    if (!pl.closed) {
      pl.start = classify(pl.points.front());
      pl.end = classify(pl.points.back());
    }
    out.push_back(std::move(pl));
  };
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (!seen[k] && link[k].size() <= 1) trace(static_cast<int>(k));
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (!seen[k]) trace(static_cast<int>(k));
  return out;
}

std::vector<LevelPolyline> off_axis_leaf_intersection(const TriMesh& mesh, double alpha) {
  const FRange r = f_range(mesh);
  const double delta = 2.0 * mesh.median_edge_length();
  std::vector<LevelPolyline> out;
  const double two_pi = 2.0 * std::numbers::pi;
  for (double level = alpha + two_pi * std::ceil((r.a - alpha) / two_pi); level <= r.b; level += two_pi) {
    for (auto& pl : level_set(mesh, level)) {
      const bool off_axis = std::any_of(pl.points.begin(), pl.points.end(),
                                        [&](const Vec3& p) { return std::hypot(p.x(), p.y()) > delta; });
      if (off_axis) out.push_back(std::move(pl));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------------

const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::rho_x: return "rho_X";
    case Symmetry::rho_y: return "rho_Y";
    case Symmetry::rho_z: return "rho_Z";
    case Symmetry::sigma_rho_x: return "sigma_h*rho_X";
  }
  return "?";
}

Vec3 apply_symmetry(Symmetry s, const Vec3& p, double h) {
  switch (s) {
    case Symmetry::rho_x: return {p.x(), -p.y(), -p.z()};
    case Symmetry::rho_y: return {-p.x(), p.y(), -p.z()};
    case Symmetry::rho_z: return {-p.x(), -p.y(), p.z()};
    case Symmetry::sigma_rho_x: return apply_screw(ScrewMotion{h, h}, Vec3(p.x(), -p.y(), -p.z()));
  }
  return p;
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // closest point by Voronoi-region classification
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + d1 / (d1 - d3) * ab)).norm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + d2 / (d2 - d6) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return (p - (b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b))).norm();
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

namespace {

// Uniform bucket grid over triangle bounding boxes.
class TriangleIndex {
 public:
  explicit TriangleIndex(const TriMesh& mesh) : mesh_(mesh) {
    lo_ = hi_ = mesh.vertices.front();
    for (const auto& v : mesh.vertices) {
      lo_ = lo_.cwiseMin(v);
      hi_ = hi_.cwiseMax(v);
    }
    cell_ = std::max(2.0 * mesh.median_edge_length(), 1e-12 * std::max(1.0, (hi_ - lo_).norm()));
    for (int d = 0; d < 3; ++d) dims_[d] = std::max(1, static_cast<int>(std::ceil((hi_[d] - lo_[d]) / cell_)) + 1);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      Vec3 a = mesh.vertices[tri[0]], b = a;
      for (int v : tri) {
        a = a.cwiseMin(mesh.vertices[v]);
        b = b.cwiseMax(mesh.vertices[v]);
      }
      const auto ca = cell_of(a), cb = cell_of(b);
      for (int i = ca[0]; i <= cb[0]; ++i)
        for (int j = ca[1]; j <= cb[1]; ++j)
          for (int k = ca[2]; k <= cb[2]; ++k) buckets_[key(i, j, k)].push_back(static_cast<int>(t));
    }
  }

  double distance(const Vec3& p) const {
    const auto c = cell_of(p);
    double best = std::numeric_limits<double>::infinity();
    const int max_ring = std::max({dims_[0], dims_[1], dims_[2]});
    // unvisited cells after `ring` lie at least ring × cell away, also for a
    // clamped query cell outside the box
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (int i = c[0] - ring; i <= c[0] + ring; ++i)
        for (int j = c[1] - ring; j <= c[1] + ring; ++j)
          for (int k = c[2] - ring; k <= c[2] + ring; ++k) {
            if (std::max({std::abs(i - c[0]), std::abs(j - c[1]), std::abs(k - c[2])}) != ring) continue;
            const auto it = buckets_.find(key(i, j, k));
            if (it == buckets_.end()) continue;
            for (int t : it->second) {
              const auto& tri = mesh_.triangles[t];
              best = std::min(best, point_triangle_distance(p, mesh_.vertices[tri[0]], mesh_.vertices[tri[1]],
                                                            mesh_.vertices[tri[2]]));
            }
          }
      if (best <= ring * cell_) break;
    }
    return best;
  }

 private:
  const TriMesh& mesh_;
  Vec3 lo_, hi_;
  double cell_;
  int dims_[3];
  std::unordered_map<long long, std::vector<int>> buckets_;

  std::array<int, 3> cell_of(const Vec3& p) const {
    std::array<int, 3> c;
    for (int d = 0; d < 3; ++d)
      c[d] = std::clamp(static_cast<int>(std::floor((p[d] - lo_[d]) / cell_)), 0, dims_[d] - 1);
    return c;
  }
  static long long key(int i, int j, int k) {
    return (static_cast<long long>(i) * 1000003LL + j) * 1000003LL + k;
  }
};

}  // namespace

double one_sided_hausdorff(const std::vector<Vec3>& points, const TriMesh& mesh) {
  if (mesh.triangles.empty()) throw ValidationError("mesh", "no triangles");
  const TriangleIndex index(mesh);
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::size_t k = 0; k < points.size(); ++k) worst = std::max(worst, index.distance(points[k]));
  return worst;
}

SymmetryReport symmetry_deviation(const TriMesh& mesh, Symmetry s, double h) {
  mesh.validate();
  std::vector<Vec3> image(mesh.vertices.size());
  for (std::size_t k = 0; k < image.size(); ++k) image[k] = apply_symmetry(s, mesh.vertices[k], h);
  SymmetryReport rep{one_sided_hausdorff(image, mesh), std::nullopt, 0};

  if (s == Symmetry::rho_y && mesh.theta) {
    // pair vertices whose images coincide with another vertex
    const double tol = 1e-6 * std::max(1.0, mesh.diameter());
    std::map<std::array<long long, 3>, int> lookup;
    auto quant = [&](const Vec3& p) {
      return std::array<long long, 3>{std::llround(p.x() / tol), std::llround(p.y() / tol), std::llround(p.z() / tol)};
    };
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) lookup.emplace(quant(mesh.vertices[k]), static_cast<int>(k));
    double dev = 0.0;
    for (std::size_t k = 0; k < image.size(); ++k) {
      const auto it = lookup.find(quant(image[k]));
      if (it == lookup.end() || (mesh.vertices[it->second] - image[k]).norm() > tol) continue;
      ++rep.matched_pairs;
      dev = std::max(dev, std::abs((*mesh.theta)[it->second] + (*mesh.theta)[k] - std::numbers::pi));
    }
    if (rep.matched_pairs > 0) rep.theta_deviation = dev;
  }
  return rep;
}

}  // namespace helicoid
