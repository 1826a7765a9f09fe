#pragma once

#include "helicoid/geometry.hpp"
#include "helicoid/trimesh.hpp"

#include <optional>
#include <vector>

namespace helicoid {

struct Topology {
  int vertices;  // referenced by at least one triangle
  int edges;
  int faces;
  int euler;     // V - E + F
  int boundary_loops;
  int components;
  bool orientable;
  std::optional<int> genus;  // (2 - χ - b)/2 for a connected orientable mesh
};

// Throws ValidationError on a non-manifold edge.
Topology euler_genus(const TriMesh& mesh);

struct FRange {
  double a, b;  // min and max of F = θ - z over vertices
};

// Throws ValidationError when the mesh has no θ field.
FRange f_range(const TriMesh& mesh);

enum class EndClass { z_plus, z_minus, boundary };

const char* to_string(EndClass c);

struct LevelPolyline {
  std::vector<Vec3> points;
  bool closed;
  EndClass start = EndClass::boundary;  // meaningful when !closed
  EndClass end = EndClass::boundary;
};

// Components of {θ - z = α} by marching triangles with linear interpolation.
// Open components have their endpoints classified against the axis: within
// δ = 2 × median edge length of Z counts as Z⁺ or Z⁻ by the sign of z.
std::vector<LevelPolyline> level_set(const TriMesh& mesh, double alpha);

// On a multigraph carrying a continuous θ field, the leaf of the pitch-1
// helicoid rotated by α about Z is {F ≡ α mod 2π}. Returns the components of
// that intersection which leave the δ-neighbourhood of the axis.
std::vector<LevelPolyline> off_axis_leaf_intersection(const TriMesh& mesh, double alpha);

enum class Symmetry { rho_x, rho_y, rho_z, sigma_rho_x };

const char* to_string(Symmetry s);

// ρ_X, ρ_Y, ρ_Z are rotations by π about the coordinate axes; sigma_rho_x is
// σ_h∘ρ_X with σ_h the screw motion by angle h and lift h, an involution.
Vec3 apply_symmetry(Symmetry s, const Vec3& p, double h = 0.0);

struct SymmetryReport {
  double hausdorff;  // one-sided: transformed vertices to the mesh surface
  std::optional<double> theta_deviation;  // ρ_Y with θ field: sup |θ∘ρ_Y + θ - π| over matched pairs
  int matched_pairs = 0;
};

SymmetryReport symmetry_deviation(const TriMesh& mesh, Symmetry s, double h = 0.0);

// Distance from p to the closest point of the triangle (a, b, c).
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// One-sided Hausdorff distance from `points` to the surface of `mesh`.
double one_sided_hausdorff(const std::vector<Vec3>& points, const TriMesh& mesh);

}  // namespace helicoid
