// One PASS/FAIL line per acceptance criterion; exits 1 when any fails.
#include "helicoid/acceptance.hpp"

#include <cstdio>

int main() {
  using namespace helicoid::acceptance;
  bool all = true;
  for (const auto& r : run_all()) {
    std::printf("%s  (%.2f s)\n", format_line(r).c_str(), r.seconds);
    if (!r.pass) std::printf("      %s\n", r.payload.dump().c_str());
    all = all && r.pass;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
