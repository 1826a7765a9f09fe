#include "helicoid/trimesh.hpp"

#include "helicoid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace helicoid {

void TriMesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int v : tri)
      if (v < 0 || v >= n) throw ValidationError("triangles", "index out of range in triangle " + std::to_string(t));
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw ValidationError("triangles", "repeated vertex in triangle " + std::to_string(t));
  }
  if (theta) {
    if (theta->size() != vertices.size()) throw ValidationError("theta", "one value per vertex required");
    for (std::size_t t = 0; t < triangles.size(); ++t) {
      const auto& tri = triangles[t];
      for (int e = 0; e < 3; ++e) {
        const double jump = std::abs((*theta)[tri[e]] - (*theta)[tri[(e + 1) % 3]]);
        if (!(jump < std::numbers::pi))
          throw ValidationError("theta", "branch jump of at least pi across an edge of triangle " + std::to_string(t));
      }
    }
  }
}

double TriMesh::median_edge_length() const {
  std::vector<double> len;
  len.reserve(triangles.size() * 3);
  for (const auto& tri : triangles)
    for (int e = 0; e < 3; ++e) {
      len.push_back((vertices[tri[e]] - vertices[tri[(e + 1) % 3]]).norm());
    }
  if (len.empty()) return 0.0;
  auto mid = len.begin() + static_cast<std::ptrdiff_t>(len.size() / 2);
  std::nth_element(len.begin(), mid, len.end());
  return *mid;
}

double TriMesh::diameter() const {
  if (vertices.empty()) return 0.0;
  Vec3 lo = vertices.front(), hi = lo;
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

std::vector<MeshEdge> build_edges(const TriMesh& mesh) {
  std::map<std::pair<int, int>, MeshEdge> map;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const auto [a, b] = std::minmax(tri[e], tri[(e + 1) % 3]);
      auto [it, fresh] = map.try_emplace({a, b}, MeshEdge{a, b, {-1, -1}, 0});
      MeshEdge& edge = it->second;
      if (edge.face_count == 2) {
        std::ostringstream msg;
        msg << "non-manifold edge (" << a << ", " << b << ") shared by more than two triangles";
        throw ValidationError("mesh", msg.str());
      }
      edge.faces[edge.face_count++] = static_cast<int>(t);
    }
  }
  std::vector<MeshEdge> out;
  out.reserve(map.size());
  for (auto& [key, e] : map) out.push_back(e);
  return out;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

TriMesh grid_mesh(int nu, int nv, bool wrap_u, bool wrap_v, const std::function<Vec3(int, int)>& point) {
  if (nu < 2 || nv < 2) throw ValidationError("grid", "need at least two samples per direction");
  if ((wrap_u && nu < 3) || (wrap_v && nv < 3)) throw ValidationError("grid", "wrapped directions need three samples");
  TriMesh m;
  m.vertices.reserve(static_cast<std::size_t>(nu) * nv);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) m.vertices.push_back(point(i, j));
  auto id = [&](int i, int j) { return (j % nv) * nu + (i % nu); };
  const int cu = wrap_u ? nu : nu - 1;
  const int cv = wrap_v ? nv : nv - 1;
  for (int j = 0; j < cv; ++j)
    for (int i = 0; i < cu; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  return m;
}

TriMesh make_tetrahedron() {
  TriMesh m;
  m.vertices = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
  m.triangles = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return m;
}

TriMesh make_icosphere(double radius, int level, const Vec3& center) {
  if (!(radius > 0.0)) throw ValidationError("radius", "must be positive");
  if (level < 0) throw ValidationError("level", "must be nonnegative");
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  m.vertices = {Vec3(-1, p, 0), Vec3(1, p, 0), Vec3(-1, -p, 0), Vec3(1, -p, 0),
                Vec3(0, -1, p), Vec3(0, 1, p), Vec3(0, -1, -p), Vec3(0, 1, -p),
                Vec3(p, 0, -1), Vec3(p, 0, 1), Vec3(-p, 0, -1), Vec3(-p, 0, 1)};
  m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) m = subdivide(m);
  for (auto& v : m.vertices) v = center + radius * v.normalized();
  return m;
}

TriMesh make_torus(double major, double minor, int nu, int nv) {
  if (!(major > minor) || !(minor > 0.0)) throw ValidationError("torus", "need major > minor > 0");
  return grid_mesh(nu, nv, true, true, [=](int i, int j) {
    const double u = 2.0 * std::numbers::pi * i / nu, v = 2.0 * std::numbers::pi * j / nv;
    return Vec3((major + minor * std::cos(v)) * std::cos(u), (major + minor * std::cos(v)) * std::sin(u),
                minor * std::sin(v));
  });
}

TriMesh make_annulus(double r0, double r1, int n_r, int n_theta) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw ValidationError("annulus", "need 0 < r0 < r1");
  return grid_mesh(n_r, n_theta, false, true, [=](int i, int j) {
    const double r = r0 + (r1 - r0) * i / (n_r - 1);
    const double t = 2.0 * std::numbers::pi * j / n_theta;
    return Vec3(r * std::cos(t), r * std::sin(t), 0.0);
  });
}

TriMesh make_polar_graph(double r0, double r1, double t0, double t1, int n_r, int n_theta,
                         const std::function<double(double, double)>& z) {
  if (!(r0 >= 0.0) || !(r1 > r0) || !(t1 > t0)) throw ValidationError("graph", "need 0 <= r0 < r1 and t0 < t1");
  auto rad = [=](int i) { return r0 + (r1 - r0) * i / (n_r - 1); };
  auto ang = [=](int j) { return t0 + (t1 - t0) * j / (n_theta - 1); };
  TriMesh m = grid_mesh(n_r, n_theta, false, false, [&](int i, int j) {
    const double r = rad(i), t = ang(j);
    return Vec3(r * std::cos(t), r * std::sin(t), z(r, t));
  });
  std::vector<double> th(m.vertices.size());
  for (int j = 0; j < n_theta; ++j)
    for (int i = 0; i < n_r; ++i) th[static_cast<std::size_t>(j) * n_r + i] = ang(j);
  m.theta = std::move(th);
  return m;
}

TriMesh make_half_helicoid(const HelicoidSpec& spec, double r0, double r1, double t0, double t1, int n_r,
                           int n_theta) {
  TriMesh m = make_polar_graph(r0, r1, t0, t1, n_r, n_theta, [&](double, double t) { return spec.pitch() * t; });
  for (std::size_t k = 0; k < m.vertices.size(); ++k) {
    const double t = (*m.theta)[k];
    const double r = std::hypot(m.vertices[k].x(), m.vertices[k].y());
    m.vertices[k] = helicoid_point(spec, r, t);
    (*m.theta)[k] = t + spec.phase();
  }
  return m;
}

TriMesh make_full_helicoid(const HelicoidSpec& spec, double R, double t0, double t1, int n_r, int n_theta) {
  if (!(R > 0.0) || !(t1 > t0)) throw ValidationError("helicoid", "need R > 0 and t0 < t1");
  return grid_mesh(n_r, n_theta, false, false, [&](int i, int j) {
    const double r = -R + 2.0 * R * i / (n_r - 1);
    const double t = t0 + (t1 - t0) * j / (n_theta - 1);
    return helicoid_point(spec, r, t);
  });
}

TriMesh subdivide(const TriMesh& mesh) {
  TriMesh out;
  out.vertices = mesh.vertices;
  if (mesh.theta) out.theta = *mesh.theta;
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    const auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    if (out.theta) out.theta->push_back(0.5 * ((*mesh.theta)[a] + (*mesh.theta)[b]));
    mid.emplace(key, id);
    return id;
  };
  for (const auto& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({t[1], bc, ab});
    out.triangles.push_back({t[2], ca, bc});
    out.triangles.push_back({ab, bc, ca});
  }
  return out;
}

TriMesh transformed(const TriMesh& mesh, const Eigen::Matrix3d& Q, const Vec3& t) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = Q * v + t;
  return out;
}

// ---------------------------------------------------------------------------
// I/O
// ---------------------------------------------------------------------------

void write_obj(std::ostream& out, const TriMesh& mesh) {
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

TriMesh read_obj(std::istream& in) {
  TriMesh m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw ValidationError("obj", "bad vertex on line " + std::to_string(lineno));
      m.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> idx;
      for (std::string tok; ls >> tok;) {
        int v = 0;
        try {
          v = std::stoi(tok.substr(0, tok.find('/')));
        } catch (const std::exception&) {
          throw ValidationError("obj", "bad face index on line " + std::to_string(lineno));
        }
        if (v == 0) throw ValidationError("obj", "zero face index on line " + std::to_string(lineno));
        idx.push_back(v > 0 ? v - 1 : static_cast<int>(m.vertices.size()) + v);
      }
      if (idx.size() < 3) throw ValidationError("obj", "face with fewer than three vertices on line " + std::to_string(lineno));
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) m.triangles.push_back({idx[0], idx[k], idx[k + 1]});
    }
  }
  m.validate();
  return m;
}

void write_theta_csv(std::ostream& out, const TriMesh& mesh) {
  if (!mesh.theta) throw ValidationError("theta", "mesh has no theta field");
  out << "vertex,theta\n";
  char buf[64];
  for (std::size_t k = 0; k < mesh.theta->size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, (*mesh.theta)[k]);
    out << buf;
  }
}

void read_theta_csv(std::istream& in, TriMesh& mesh) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("theta", "empty sidecar");
  std::vector<double> th(mesh.vertices.size(), std::numeric_limits<double>::quiet_NaN());
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("theta", "expected two columns on line " + std::to_string(lineno));
    std::size_t k = 0;
    double v = 0.0;
    try {
      k = std::stoul(line.substr(0, comma));
      v = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw ValidationError("theta", "malformed line " + std::to_string(lineno));
    }
    if (k >= th.size()) throw ValidationError("theta", "vertex index out of range on line " + std::to_string(lineno));
    th[k] = v;
  }
  for (std::size_t k = 0; k < th.size(); ++k)
    if (std::isnan(th[k])) throw ValidationError("theta", "no value for vertex " + std::to_string(k));
  mesh.theta = std::move(th);
  mesh.validate();
}

}  // namespace helicoid
