#include "helicoid/errors.hpp"
#include "helicoid/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace helicoid;

TEST_CASE("fixed rounds to significant digits") {
  CHECK(fixed(0.1 + 0.2).dump() == "0.3");
  CHECK(fixed(1.0 / 3.0).dump() == Json(0.333333333333).dump());
  CHECK(fixed(123456.7891, 6).get<double>() == 123457.0);
  CHECK(fixed(-2.5e-17).get<double>() == -2.5e-17);
  CHECK(fixed(0.0).get<double>() == 0.0);
  CHECK(fixed(std::nan("")).is_null());
  CHECK(fixed(std::numeric_limits<double>::infinity()).is_null());
  // values that differ beyond the kept digits print identically
  CHECK(fixed(1.0000000000001).dump() == fixed(1.0000000000002).dump());
}

TEST_CASE("report wrapping") {
  Json payload{{"b", 1}, {"a", 2}};
  const auto w = wrap_report(payload, {{"note", "x"}});
  REQUIRE(w.contains("payload"));
  REQUIRE(w.contains("metadata"));
  CHECK(w.begin().key() == "payload");
  // insertion order survives
  CHECK(w["payload"].begin().key() == "b");
  const auto m = stamped_metadata({{"seed", 3}});
  CHECK(m["seed"] == 3);
  CHECK(m.contains("generated_at"));
  CHECK(m.contains("tool"));
  const std::string ts = m["generated_at"];
  CHECK(ts.size() == 20);
  CHECK(ts.back() == 'Z');
}

TEST_CASE("to_json shapes") {
  const auto c = to_json(boundary_gate(kPi / 2, 1));
  CHECK(c["total"].get<double>() == doctest::Approx(10.7261).epsilon(1e-5));
  CHECK(c["pass"] == true);
  CHECK(c["corners"].size() == 4);
  const auto t = to_json(euler_genus(make_tetrahedron()));
  CHECK(t["chi"] == 2);
  CHECK(t["genus"] == 0);
  const auto u = to_json(euler_genus(make_torus(2, 0.5, 8, 6)));
  CHECK(u["genus"] == 1);
  const DecayFit f{1.0, 0.5, 2, 16, 0.01, 9};
  const auto fj = to_json(f, true);
  CHECK(fj["beta_hat"] == 1.0);
  CHECK(fj["window"].size() == 2);
  CHECK(fj["pass"] == true);
  const auto r = residue_json(Complex(1, -2), PoleOrder{2, -2.0, 1e-12});
  CHECK(r["residue_re"] == 1.0);
  CHECK(r["residue_im"] == -2.0);
  CHECK(r["pole_order"] == 2);
}

TEST_CASE("write_json") {
  const auto dir = std::filesystem::temp_directory_path() / "helicoid_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "r.json").string();
  write_json(path, wrap_report({{"x", fixed(0.1 + 0.2)}}));
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.back() == '\n');
  CHECK(Json::parse(text)["payload"]["x"] == 0.3);
  CHECK_THROWS_AS(write_json((dir / "missing" / "r.json").string(), Json::object()), Error);
  std::filesystem::remove_all(dir);
}
