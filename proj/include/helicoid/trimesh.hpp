#pragma once

#include "helicoid/geometry.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace helicoid {

// Indexed triangle mesh with an optional per-vertex branch angle θ.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::optional<std::vector<double>> theta;

  std::size_t vertex_count() const noexcept { return vertices.size(); }
  std::size_t triangle_count() const noexcept { return triangles.size(); }

  // Index ranges, θ size, and θ continuity (jump < π across every edge).
  // Throws ValidationError.
  void validate() const;

  double median_edge_length() const;
  double diameter() const;  // bounding-box diagonal
};

// Undirected edge a < b with its incident triangles.
struct MeshEdge {
  int a, b;
  int faces[2];
  int face_count;
  bool boundary() const { return face_count == 1; }
};

// Edges in lexicographic (a, b) order. Throws ValidationError naming the
// first edge shared by more than two triangles.
std::vector<MeshEdge> build_edges(const TriMesh& mesh);

// Quad grid of nu × nv samples split into triangles. Wrapped directions
// identify the last column/row with the first, without duplicate vertices.
TriMesh grid_mesh(int nu, int nv, bool wrap_u, bool wrap_v, const std::function<Vec3(int, int)>& point);

TriMesh make_tetrahedron();
// Icosahedron refined `level` times by 1-to-4 subdivision, projected to the sphere.
TriMesh make_icosphere(double radius, int level, const Vec3& center = Vec3::Zero());
TriMesh make_torus(double major, double minor, int nu, int nv);
// Planar annulus r0 ≤ r ≤ r1 in z = 0.
TriMesh make_annulus(double r0, double r1, int n_r, int n_theta);
// Surface (r cos θ, r sin θ, z(r, θ)) over [r0, r1] × [t0, t1]; θ field set to θ.
TriMesh make_polar_graph(double r0, double r1, double t0, double t1, int n_r, int n_theta,
                         const std::function<double(double, double)>& z);
// Half-helicoid leaf r ∈ [r0, r1] (r0 ≥ 0) with its unreduced θ field.
TriMesh make_half_helicoid(const HelicoidSpec& spec, double r0, double r1, double t0, double t1, int n_r,
                           int n_theta);
// Both leaves, r ∈ [-R, R], containing the axis; no θ field.
TriMesh make_full_helicoid(const HelicoidSpec& spec, double R, double t0, double t1, int n_r, int n_theta);
// One 1-to-4 subdivision; θ is averaged on new vertices.
TriMesh subdivide(const TriMesh& mesh);

// Applies p -> Qp + t to every vertex.
TriMesh transformed(const TriMesh& mesh, const Eigen::Matrix3d& Q, const Vec3& t = Vec3::Zero());

// Wavefront OBJ, 9 significant digits, 1-based faces.
void write_obj(std::ostream& out, const TriMesh& mesh);
// Reads v/f records; polygon faces are fan-triangulated, texture/normal
// indices ignored, negative indices resolved relative to the vertex count.
TriMesh read_obj(std::istream& in);
// Sidecar CSV "vertex,theta".
void write_theta_csv(std::ostream& out, const TriMesh& mesh);
void read_theta_csv(std::istream& in, TriMesh& mesh);

}  // namespace helicoid
