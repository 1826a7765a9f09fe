#include "helicoid/io.hpp"

#include "helicoid/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

namespace helicoid {

Json fixed(double x, int digits) {
  if (!std::isfinite(x)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
  return std::strtod(buf, nullptr);
}

namespace {

Json fixed_array(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(fixed(x));
  return a;
}

}  // namespace

Json to_json(const SolveReport& r) {
  return Json{{"iterations", r.iterations}, {"residuals", fixed_array(r.residuals)}, {"converged", r.converged}};
}

Json to_json(const DecayFit& f, bool pass) {
  return Json{{"beta_hat", fixed(f.beta_hat)},
              {"intercept", fixed(f.intercept)},
              {"window", Json::array({fixed(f.r_lo), fixed(f.r_hi)})},
              {"residual", fixed(f.residual)},
              {"levels", f.levels},
              {"pass", pass}};
}

Json to_json(const DecaySequenceReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"R", fixed(e.R)}, {"first", fixed(e.first)}, {"second", fixed(e.second)}});
  return Json{{"entries", entries},
              {"first_slope", fixed(r.first_slope)},
              {"second_slope", fixed(r.second_slope)},
              {"first_pass", r.first_pass},
              {"second_pass", r.second_pass}};
}

Json to_json(const BarrierCheck& c) { return Json{{"deviation", fixed(c.deviation)}, {"sign_ok", c.sign_ok}}; }

Json to_json(const CurvatureReport& r) {
  Json segs = Json::array();
  for (const auto& s : r.segments) segs.push_back({{"name", s.name}, {"total", fixed(s.total)}});
  return Json{{"total", fixed(r.total)},
              {"segments", segs},
              {"corners", fixed_array(r.corners)},
              {"budget", fixed(r.budget)},
              {"pass", r.pass}};
}

Json to_json(const ArcMarginRow& row) {
  return Json{{"r", fixed(row.r)}, {"total", fixed(row.total)}, {"margin", fixed(row.margin)}, {"pass", row.pass}};
}

Json to_json(const Topology& t) {
  return Json{{"V", t.vertices},
              {"E", t.edges},
              {"F", t.faces},
              {"chi", t.euler},
              {"boundary_loops", t.boundary_loops},
              {"components", t.components},
              {"orientable", t.orientable},
              {"genus", t.genus ? Json(*t.genus) : Json(nullptr)}};
}

Json to_json(const LevelPolyline& p) {
  Json j{{"points", p.points.size()}, {"closed", p.closed}};
  if (!p.closed) {
    j["start"] = to_string(p.start);
    j["end"] = to_string(p.end);
  }
  return j;
}

Json to_json(const SymmetryReport& s) {
  return Json{{"hausdorff", fixed(s.hausdorff)},
              {"theta_deviation", s.theta_deviation ? fixed(*s.theta_deviation) : Json(nullptr)},
              {"matched_pairs", s.matched_pairs}};
}

Json to_json(const Registration& r) {
  return Json{{"reflected", r.reflected},
              {"max_distance", fixed(r.max_distance, 6)},
              {"rms_distance", fixed(r.rms_distance, 6)},
              {"diameter", fixed(r.diameter)},
              {"relative", fixed(r.relative(), 6)}};
}

Json residue_json(Complex residue, const PoleOrder& order) {
  return Json{{"residue_re", fixed(residue.real(), 6)},
              {"residue_im", fixed(residue.imag(), 6)},
              {"pole_order", order.order},
              {"fit_residual", fixed(order.residual, 6)}};
}

Json wrap_report(Json payload, Json metadata) {
  return Json{{"payload", std::move(payload)}, {"metadata", std::move(metadata)}};
}

Json stamped_metadata(Json metadata) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  metadata["generated_at"] = buf;
  metadata["tool"] = "helicoid";
  return metadata;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path);
}

}  // namespace helicoid
