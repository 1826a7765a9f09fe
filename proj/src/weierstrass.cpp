#include "helicoid/weierstrass.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace helicoid {

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

struct Expr::Node {
  Op op;
  Complex value;  // constant
  int power = 0;  // pow
  std::shared_ptr<const Node> a, b;
};

namespace {

bool is_const(const std::shared_ptr<const Expr::Node>& n, Complex c) {
  return n->op == Expr::Op::constant && n->value == c;
}

}  // namespace

Expr Expr::constant(Complex c) { return Expr(std::make_shared<const Node>(Node{Op::constant, c, 0, nullptr, nullptr})); }

Expr Expr::variable() { return Expr(std::make_shared<const Node>(Node{Op::variable, {}, 0, nullptr, nullptr})); }

Expr operator+(const Expr& a, const Expr& b) {
  if (is_const(a.node_, 0.0)) return b;
  if (is_const(b.node_, 0.0)) return a;
  if (a.node_->op == Expr::Op::constant && b.node_->op == Expr::Op::constant)
    return Expr::constant(a.node_->value + b.node_->value);
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Op::add, {}, 0, a.node_, b.node_}));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (is_const(b.node_, 0.0)) return a;
  if (is_const(a.node_, 0.0)) return -b;
  if (a.node_->op == Expr::Op::constant && b.node_->op == Expr::Op::constant)
    return Expr::constant(a.node_->value - b.node_->value);
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Op::sub, {}, 0, a.node_, b.node_}));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (is_const(a.node_, 0.0) || is_const(b.node_, 0.0)) return Expr::constant(0.0);
  if (is_const(a.node_, 1.0)) return b;
  if (is_const(b.node_, 1.0)) return a;
  if (a.node_->op == Expr::Op::constant && b.node_->op == Expr::Op::constant)
    return Expr::constant(a.node_->value * b.node_->value);
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Op::mul, {}, 0, a.node_, b.node_}));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (is_const(b.node_, 0.0)) throw ValidationError("expression", "division by the constant 0");
  if (is_const(a.node_, 0.0)) return Expr::constant(0.0);
  if (is_const(b.node_, 1.0)) return a;
  if (a.node_->op == Expr::Op::constant && b.node_->op == Expr::Op::constant)
    return Expr::constant(a.node_->value / b.node_->value);
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Op::div, {}, 0, a.node_, b.node_}));
}

Expr operator-(const Expr& a) {
  if (a.node_->op == Expr::Op::constant) return Expr::constant(-a.node_->value);
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Op::neg, {}, 0, a.node_, nullptr}));
}

Expr pow(const Expr& a, int n) {
  if (n == 0) return Expr::constant(1.0);
  if (n == 1) return a;
  if (a.node_->op == Expr::Op::constant) return Expr::constant(std::pow(a.node_->value, n));
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Op::pow, {}, n, a.node_, nullptr}));
}

Expr exp(const Expr& a) {
  if (a.node_->op == Expr::Op::constant) return Expr::constant(std::exp(a.node_->value));
  return Expr(std::make_shared<const Expr::Node>(Expr::Node{Expr::Op::exp, {}, 0, a.node_, nullptr}));
}

Complex Expr::operator()(Complex z) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return z;
    case Op::add: return Expr(n.a)(z) + Expr(n.b)(z);
    case Op::sub: return Expr(n.a)(z) - Expr(n.b)(z);
    case Op::mul: return Expr(n.a)(z) * Expr(n.b)(z);
    case Op::div: return Expr(n.a)(z) / Expr(n.b)(z);
    case Op::neg: return -Expr(n.a)(z);
    case Op::exp: return std::exp(Expr(n.a)(z));
    case Op::pow: {
      const Complex base = Expr(n.a)(z);
      Complex acc = 1.0;
      for (int k = 0; k < std::abs(n.power); ++k) acc *= base;
      return n.power < 0 ? 1.0 / acc : acc;
    }
  }
  return {};
}

Expr Expr::derivative() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant: return constant(0.0);
    case Op::variable: return constant(1.0);
    case Op::add: return Expr(n.a).derivative() + Expr(n.b).derivative();
    case Op::sub: return Expr(n.a).derivative() - Expr(n.b).derivative();
    case Op::mul: return Expr(n.a).derivative() * Expr(n.b) + Expr(n.a) * Expr(n.b).derivative();
    case Op::div:
      return (Expr(n.a).derivative() * Expr(n.b) - Expr(n.a) * Expr(n.b).derivative()) / pow(Expr(n.b), 2);
    case Op::neg: return -Expr(n.a).derivative();
    case Op::exp: return Expr(node_) * Expr(n.a).derivative();
    case Op::pow: return constant(static_cast<double>(n.power)) * pow(Expr(n.a), n.power - 1) * Expr(n.a).derivative();
  }
  return constant(0.0);
}

std::string Expr::str() const {
  const Node& n = *node_;
  std::ostringstream out;
  switch (n.op) {
    case Op::constant:
      if (n.value.imag() == 0.0) out << n.value.real();
      else if (n.value.real() == 0.0) out << "(" << n.value.imag() << "*i)";
      else out << "(" << n.value.real() << "+" << n.value.imag() << "*i)";
      break;
    case Op::variable: out << "z"; break;
    case Op::add: out << "(" << Expr(n.a).str() << " + " << Expr(n.b).str() << ")"; break;
    case Op::sub: out << "(" << Expr(n.a).str() << " - " << Expr(n.b).str() << ")"; break;
    case Op::mul: out << Expr(n.a).str() << "*" << Expr(n.b).str(); break;
    case Op::div: out << Expr(n.a).str() << "/" << Expr(n.b).str(); break;
    case Op::neg: out << "-" << Expr(n.a).str(); break;
    case Op::exp: out << "exp(" << Expr(n.a).str() << ")"; break;
    case Op::pow: out << Expr(n.a).str() << "^" << n.power; break;
  }
  return out.str();
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("expression", what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) e = e + product();
      else if (accept('-')) e = e - product();
      else return e;
    }
  }
  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }
  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }
  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const long n = std::strtol(begin, &end, 10);
    if (end == begin) fail("expected an integer exponent");
    pos_ += static_cast<std::size_t>(end - begin);
    return pow(base, static_cast<int>(n));
  }
  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      Expr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      pos_ += static_cast<std::size_t>(end - begin);
      return Expr::constant(v);
    }
    if (s_.compare(pos_, 4, "exp(") == 0) {
      pos_ += 4;
      Expr e = sum();
      if (!accept(')')) fail("expected ')'");
      return exp(e);
    }
    if (c == 'z') {
      ++pos_;
      return Expr::variable();
    }
    if (c == 'i') {
      ++pos_;
      return Expr::constant(Complex(0.0, 1.0));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Weierstrass data and immersion
// ---------------------------------------------------------------------------

WeierstrassData WeierstrassData::helicoid() {
  return {exp(Expr::variable()), Expr::constant(Complex(0.0, 1.0)), "helicoid"};
}

WeierstrassData WeierstrassData::catenoid() {
  return {Expr::variable(), Expr::constant(1.0) / Expr::variable(), "catenoid"};
}

WeierstrassData WeierstrassData::plane(Complex g0) { return {Expr::constant(g0), Expr::constant(1.0), "plane"}; }

std::array<Complex, 3> WeierstrassData::phi(Complex z) const {
  const Complex gz = g(z);
  const Complex dh = dh_coef(z);
  const Complex inv = 1.0 / gz;
  const Complex I(0.0, 1.0);
  return {0.5 * (inv - gz) * dh, 0.5 * I * (inv + gz) * dh, dh};
}

ParamMesh ParamMesh::rectangle(double u0, double u1, double v0, double v1, int nu, int nv) {
  if (!(u1 > u0) || !(v1 > v0)) throw ValidationError("domain", "empty rectangle");
  TriMesh m = grid_mesh(nu, nv, false, false, [&](int i, int j) {
    return Vec3(u0 + (u1 - u0) * i / (nu - 1), v0 + (v1 - v0) * j / (nv - 1), 0.0);
  });
  ParamMesh p;
  for (const auto& v : m.vertices) p.points.emplace_back(v.x(), v.y());
  p.triangles = std::move(m.triangles);
  return p;
}

ParamMesh ParamMesh::annulus(double r0, double r1, int n_r, int n_t) {
  if (!(r0 > 0.0) || !(r1 > r0)) throw ValidationError("domain", "need 0 < r0 < r1");
  TriMesh m = grid_mesh(n_r, n_t, false, true, [&](int i, int j) {
    const double rho = r0 * std::pow(r1 / r0, static_cast<double>(i) / (n_r - 1));
    const double t = 2.0 * std::numbers::pi * j / n_t;
    return Vec3(rho * std::cos(t), rho * std::sin(t), 0.0);
  });
  ParamMesh p;
  for (const auto& v : m.vertices) p.points.emplace_back(v.x(), v.y());
  p.triangles = std::move(m.triangles);
  return p;
}

namespace {

// 8-point Gauss-Legendre on [0, 1]
constexpr std::array<double, 8> kGLx = {0.019855071751231856, 0.10166676129318664, 0.2372337950418355,
                                        0.4082826787521751,   0.5917173212478249,  0.7627662049581645,
                                        0.8983332387068134,   0.9801449282487681};
constexpr std::array<double, 8> kGLw = {0.05061426814518813, 0.11119051722668724, 0.15685332293894363,
                                        0.18134189168918100, 0.18134189168918100, 0.15685332293894363,
                                        0.11119051722668724, 0.05061426814518813};

Vec3 edge_integral(const WeierstrassData& d, Complex za, Complex zb) {
  const Complex dz = zb - za;
  std::array<Complex, 3> acc{};
  for (int k = 0; k < 8; ++k) {
    const auto p = d.phi(za + kGLx[k] * dz);
    for (int c = 0; c < 3; ++c) acc[c] += kGLw[k] * p[c];
  }
  return {(acc[0] * dz).real(), (acc[1] * dz).real(), (acc[2] * dz).real()};
}

}  // namespace

Immersion immerse(const WeierstrassData& data, const ParamMesh& domain, int base, double rel_tol) {
  const int n = static_cast<int>(domain.points.size());
  if (base < 0 || base >= n) throw ValidationError("base", "base vertex out of range");
  TriMesh topo;
  topo.vertices.assign(static_cast<std::size_t>(n), Vec3::Zero());
  topo.triangles = domain.triangles;
  topo.validate();
  const auto edges = build_edges(topo);

  std::vector<Vec3> integral(edges.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::size_t e = 0; e < edges.size(); ++e) {
    try {
      integral[e] = edge_integral(data, domain.points[edges[e].a], domain.points[edges[e].b]);
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (!integral[e].allFinite()) {
      std::ostringstream msg;
      msg << "immerse: non-finite integrand on edge (" << edges[e].a << ", " << edges[e].b
          << "); the path meets a zero or pole of the data";
      throw DomainError(msg.str());
    }

  // adjacency: (neighbour, edge id, sign)
  std::vector<std::vector<std::array<int, 2>>> adj(static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].a].push_back({edges[e].b, static_cast<int>(e)});
    adj[edges[e].b].push_back({edges[e].a, static_cast<int>(e)});
  }
  std::vector<int> parent(n, -1), depth(n, -1), parent_edge(n, -1);
  std::vector<double> dist(n, 0.0);
  std::vector<Vec3> x(n, Vec3::Zero());
  std::vector<bool> tree_edge(edges.size(), false);
  std::queue<int> q;
  depth[base] = 0;
  q.push(base);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const auto& [w, e] : adj[v]) {
      if (depth[w] >= 0) continue;
      const Vec3 step = edges[e].a == v ? integral[e] : Vec3(-integral[e]);
      depth[w] = depth[v] + 1;
      parent[w] = v;
      parent_edge[w] = e;
      tree_edge[e] = true;
      x[w] = x[v] + step;
      dist[w] = dist[v] + step.norm();
      q.push(w);
    }
  }
  for (int v = 0; v < n; ++v)
    if (depth[v] < 0) throw ValidationError("domain", "parameter mesh is disconnected");

  Immersion im;
  im.base = base;
  im.worst_period = 0.0;
  double worst_ratio = 0.0;
  int worst_edge = -1;
  Vec3 worst_vec = Vec3::Zero();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (tree_edge[e]) continue;
    const int a = edges[e].a, b = edges[e].b;
    const Vec3 period = x[b] - x[a] - integral[e];
    int p = a, r = b;
    while (depth[p] > depth[r]) p = parent[p];
    while (depth[r] > depth[p]) r = parent[r];
    while (p != r) {
      p = parent[p];
      r = parent[r];
    }
    const double loop = dist[a] + dist[b] - 2.0 * dist[p] + integral[e].norm();
    const double ratio = period.norm() / std::max(loop, std::numeric_limits<double>::min());
    im.worst_period = std::max(im.worst_period, period.norm());
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst_edge = static_cast<int>(e);
      worst_vec = period;
    }
  }
  if (worst_ratio > rel_tol) {
    std::ostringstream msg;
    msg << "immerse: real period " << worst_vec.transpose() << " on the loop closed by edge (" << edges[worst_edge].a
        << ", " << edges[worst_edge].b << ") exceeds " << rel_tol << " x loop length";
    throw PeriodError(msg.str(), edges[worst_edge].a, edges[worst_edge].b, worst_vec);
  }

  im.mesh.vertices = std::move(x);
  im.mesh.triangles = domain.triangles;
  im.params = domain.points;
  return im;
}

double principal_curvature(const WeierstrassData& data, Complex z) {
  const Complex gz = data.g(z);
  const Complex dh = data.dh_coef(z);
  const double ag = std::abs(gz);
  if (!(ag > 0.0) || !std::isfinite(ag)) throw DomainError("principal_curvature: g has a zero or pole here");
  if (!(std::abs(dh) > 0.0) || !std::isfinite(std::abs(dh)))
    throw DomainError("principal_curvature: dh vanishes or is singular here");
  const Complex dlog = data.g.derivative()(z) / gz;
  const double s = ag + 1.0 / ag;
  return 4.0 * std::abs(dlog) / std::abs(dh) / (s * s);
}

// ---------------------------------------------------------------------------
// Residues and pole orders
// ---------------------------------------------------------------------------

FormCoef at_infinity(FormCoef coef) {
  return [c = std::move(coef)](Complex eta) { return c(1.0 / eta) * (-1.0 / (eta * eta)); };
}

Complex residue(const FormCoef& coef, Complex center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("radius", "must be positive");
  auto trapezoid = [&](int n, double& scale) {
    Complex acc = 0.0;
    scale = 0.0;
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * std::numbers::pi * k / n;
      const Complex e = std::polar(1.0, t);
      const Complex term = coef(center + radius * e) * Complex(0.0, radius) * e;
      if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
        throw DomainError("residue: the loop meets a singularity");
      acc += term;
      scale += std::abs(term);
    }
    scale /= n;
    // (1/2πi) · (2π/n) Σ = Σ / (i n)
    return acc / Complex(0.0, static_cast<double>(n));
  };
  double scale = 0.0;
  Complex prev = trapezoid(16, scale);
  for (int n = 32; n <= (1 << 20); n *= 2) {
    const Complex cur = trapezoid(n, scale);
    if (std::abs(cur - prev) <= 1e-13 * std::max(1.0, scale)) return cur;
    prev = cur;
  }
  throw ConvergenceError("residue: trapezoid values did not settle", std::abs(prev));
}

PoleOrder pole_order(const FormCoef& coef, Complex puncture, std::span<const double> radii) {
  if (radii.size() < 4) throw ValidationError("radii", "need at least four radii");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  if (!(*lo > 0.0) || *hi < 10.0 * *lo * (1.0 - 1e-12)) throw ValidationError("radii", "radii must span a decade");
  std::vector<double> x, y;
  for (double rho : radii) {
    double m = 0.0;
    for (int k = 0; k < 64; ++k) {
      const Complex z = puncture + std::polar(rho, 2.0 * std::numbers::pi * (k + 0.5) / 64.0);
      m = std::max(m, std::abs(coef(z)));
    }
    if (!(m > 0.0) || !std::isfinite(m)) throw Error("order indeterminate: coefficient vanishes or diverges on a circle");
    x.push_back(std::log(rho));
    y.push_back(std::log(m));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k] / n;
    my += y[k] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - (my + slope * (x[k] - mx));
    ss += e * e;
  }
  const double residual = std::sqrt(ss / n);
  const double nearest = std::round(-slope);
  if (std::abs(-slope - nearest) > 0.1 || residual > 0.05) {
    std::ostringstream msg;
    msg << "order indeterminate: slope " << slope << ", fit residual " << residual;
    throw Error(msg.str());
  }
  return {std::max(0, static_cast<int>(nearest)), slope, residual};
}

// ---------------------------------------------------------------------------
// Mean curvature
// ---------------------------------------------------------------------------

MeanCurvature mean_curvature(const TriMesh& mesh) {
  mesh.validate();
  const auto edges = build_edges(mesh);
  const std::size_t nv = mesh.vertices.size();
  std::vector<bool> interior(nv, true);
  std::vector<bool> used(nv, false);
  for (const auto& t : mesh.triangles)
    for (int v : t) used[v] = true;
  for (const auto& e : edges)
    if (e.boundary()) interior[e.a] = interior[e.b] = false;
  for (std::size_t v = 0; v < nv; ++v)
    if (!used[v]) interior[v] = false;

  std::vector<int> degenerate;
  std::vector<Vec3> lap(nv, Vec3::Zero());
  std::vector<double> area(nv, 0.0);
  const double scale = mesh.median_edge_length();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3& p0 = mesh.vertices[tri[0]];
    const Vec3& p1 = mesh.vertices[tri[1]];
    const Vec3& p2 = mesh.vertices[tri[2]];
    const double a2 = (p1 - p0).cross(p2 - p0).norm();  // twice the area
    if (!(a2 > 1e-14 * scale * scale)) {
      degenerate.push_back(static_cast<int>(t));
      continue;
    }
    const Vec3* p[3] = {&p0, &p1, &p2};
    double cot[3];
    for (int k = 0; k < 3; ++k) {
      const Vec3 u = *p[(k + 1) % 3] - *p[k];
      const Vec3 w = *p[(k + 2) % 3] - *p[k];
      cot[k] = u.dot(w) / a2;
    }
    // edge opposite vertex k joins k+1 and k+2
    for (int k = 0; k < 3; ++k) {
      const int i = tri[(k + 1) % 3], j = tri[(k + 2) % 3];
      const Vec3 d = mesh.vertices[i] - mesh.vertices[j];
      lap[i] += cot[k] * d;
      lap[j] -= cot[k] * d;
    }
    const double A = 0.5 * a2;
    const int obtuse = cot[0] < 0 ? 0 : cot[1] < 0 ? 1 : cot[2] < 0 ? 2 : -1;
    for (int k = 0; k < 3; ++k) {
      if (obtuse < 0) {
        const double e1 = (*p[(k + 1) % 3] - *p[k]).squaredNorm();
        const double e2 = (*p[(k + 2) % 3] - *p[k]).squaredNorm();
        // Voronoi region: edge k→k+1 is opposite vertex k+2, edge k→k+2 opposite k+1
        area[tri[k]] += (e1 * cot[(k + 2) % 3] + e2 * cot[(k + 1) % 3]) / 8.0;
      } else {
        area[tri[k]] += k == obtuse ? A / 2.0 : A / 4.0;
      }
    }
  }
  if (!degenerate.empty()) {
    std::ostringstream msg;
    msg << "degenerate triangles:";
    for (std::size_t k = 0; k < degenerate.size() && k < 20; ++k) msg << ' ' << degenerate[k];
    if (degenerate.size() > 20) msg << " ... (" << degenerate.size() << " total)";
    throw ValidationError("mesh", msg.str());
  }
  MeanCurvature out{std::vector<double>(nv, std::numeric_limits<double>::quiet_NaN()), interior, 0.0};
  for (std::size_t v = 0; v < nv; ++v) {
    if (!interior[v]) continue;
    out.values[v] = lap[v].norm() / (4.0 * area[v]);
    out.sup = std::max(out.sup, out.values[v]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Registration
// ---------------------------------------------------------------------------

namespace {

using Params = Eigen::Matrix<double, 6, 1>;

Eigen::Matrix3d rotation_of(const Eigen::Vector3d& w) {
  const double angle = w.norm();
  if (angle == 0.0) return Eigen::Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

// Minimizes f over ℝ⁶ from x0 with initial simplex steps `step`.
Params nelder_mead(const std::function<double(const Params&)>& f, const Params& x0, const Params& step, int max_iter,
                   double abs_tol) {
  std::array<Params, 7> s;
  std::array<double, 7> fv;
  s[0] = x0;
  for (int k = 0; k < 6; ++k) {
    s[k + 1] = x0;
    s[k + 1][k] += step[k];
  }
  for (int k = 0; k < 7; ++k) fv[k] = f(s[k]);
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 7> order;
    for (int k = 0; k < 7; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::array<Params, 7> s2;
    std::array<double, 7> f2;
    for (int k = 0; k < 7; ++k) {
      s2[k] = s[order[k]];
      f2[k] = fv[order[k]];
    }
    s = s2;
    fv = f2;
    if (fv[6] - fv[0] <= abs_tol + 1e-12 * std::abs(fv[0])) break;
    Params c = Params::Zero();
    for (int k = 0; k < 6; ++k) c += s[k] / 6.0;
    const Params xr = c + (c - s[6]);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const Params xe = c + 2.0 * (c - s[6]);
      const double fe = f(xe);
      if (fe < fr) {
        s[6] = xe;
        fv[6] = fe;
      } else {
        s[6] = xr;
        fv[6] = fr;
      }
    } else if (fr < fv[5]) {
      s[6] = xr;
      fv[6] = fr;
    } else {
      const Params xc = fr < fv[6] ? Params(c + 0.5 * (xr - c)) : Params(c + 0.5 * (s[6] - c));
      const double fc = f(xc);
      if (fc < std::min(fr, fv[6])) {
        s[6] = xc;
        fv[6] = fc;
      } else {
        for (int k = 1; k < 7; ++k) {
          s[k] = s[0] + 0.5 * (s[k] - s[0]);
          fv[k] = f(s[k]);
        }
      }
    }
  }
  const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
  return s[static_cast<std::size_t>(best)];
}

}  // namespace

Registration register_to_helicoid(const TriMesh& mesh, const HelicoidSpec& spec, bool allow_reflection,
                                  int sample_count) {
  const std::size_t nv = mesh.vertices.size();
  if (nv < 4) throw ValidationError("mesh", "need at least four vertices");
  const double diam = mesh.diameter();
  const double tol = 1e-9 * std::max(1.0, diam);

  Vec3 centroid = Vec3::Zero();
  for (const auto& v : mesh.vertices) centroid += v;
  centroid /= static_cast<double>(nv);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& v : mesh.vertices) cov += (v - centroid) * (v - centroid).transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Matrix3d axes = eig.eigenvectors();

  std::vector<Vec3> sample;
  const std::size_t m = std::min<std::size_t>(nv, static_cast<std::size_t>(std::max(sample_count, 4)));
  for (std::size_t k = 0; k < m; ++k) sample.push_back(mesh.vertices[k * nv / m] - centroid);

  auto cost = [&](const Eigen::Matrix3d& Q, const Vec3& t) {
    double acc = 0.0;
    for (const auto& p : sample) {
      const double d = distance_to_helicoid(Q * p + t, spec, tol);
      acc += d * d;
    }
    return acc / static_cast<double>(sample.size());
  };

  struct Candidate {
    Eigen::Matrix3d Q0;
    double cost;
  };
  std::vector<Candidate> cands;
  const Eigen::Matrix3d mirror = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();
  for (int reflect = 0; reflect < (allow_reflection ? 2 : 1); ++reflect) {
    for (int a = 0; a < 3; ++a) {
      for (int sgn : {1, -1}) {
        // frame whose third row is the candidate axis
        Eigen::Matrix3d F;
        F.row(2) = sgn * axes.col(a).transpose();
        F.row(0) = axes.col((a + 1) % 3).transpose();
        F.row(1) = F.row(2).cross(F.row(0));
        if (reflect) F = mirror * F;
        for (int k = 0; k < 24; ++k) {
          const double phi = 2.0 * std::numbers::pi * k / 24.0;
          const Eigen::Matrix3d Q0 = Eigen::AngleAxisd(phi, Vec3::UnitZ()).toRotationMatrix() * F;
          cands.push_back({Q0, 0.0});
        }
      }
    }
  }
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < cands.size(); ++k) cands[k].cost = cost(cands[k].Q0, Vec3::Zero());
  std::sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) { return x.cost < y.cost; });

  Params best = Params::Zero();
  Eigen::Matrix3d bestQ0 = cands.front().Q0;
  double best_cost = std::numeric_limits<double>::infinity();
  Params step;
  step << 0.05, 0.05, 0.05, 0.02 * diam, 0.02 * diam, 0.02 * diam;
  for (std::size_t c = 0; c < std::min<std::size_t>(4, cands.size()); ++c) {
    const Eigen::Matrix3d Q0 = cands[c].Q0;
    auto f = [&](const Params& x) { return cost(rotation_of(x.head<3>()) * Q0, x.tail<3>()); };
    const double floor = 1e-24 * diam * diam;
    Params x = nelder_mead(f, Params::Zero(), step, 3000, floor);
    x = nelder_mead(f, x, 0.01 * step, 3000, floor);
    const double fx = f(x);
    if (fx < best_cost) {
      best_cost = fx;
      best = x;
      bestQ0 = Q0;
    }
  }

  Registration reg;
  reg.Q = rotation_of(best.head<3>()) * bestQ0;
  reg.t = best.tail<3>() - reg.Q * centroid;
  reg.reflected = reg.Q.determinant() < 0.0;
  reg.diameter = diam;
  double max_d = 0.0, sum2 = 0.0;
#pragma omp parallel for reduction(max : max_d) reduction(+ : sum2)
  for (std::size_t k = 0; k < nv; ++k) {
    const double d = distance_to_helicoid(reg.Q * mesh.vertices[k] + reg.t, spec, tol);
    max_d = std::max(max_d, d);
    sum2 += d * d;
  }
  reg.max_distance = max_d;
  reg.rms_distance = std::sqrt(sum2 / static_cast<double>(nv));
  return reg;
}

int level_curve_ends(const TriMesh& mesh, double c, const std::vector<bool>& near_puncture) {
  if (near_puncture.size() != mesh.vertices.size()) throw ValidationError("near_puncture", "one flag per vertex");
  int count = 0;
  for (const auto& e : build_edges(mesh)) {
    if (!e.boundary() || !near_puncture[e.a] || !near_puncture[e.b]) continue;
    const bool sa = mesh.vertices[e.a].z() >= c;
    const bool sb = mesh.vertices[e.b].z() >= c;
    if (sa != sb) ++count;
  }
  return count;
}

}  // namespace helicoid
