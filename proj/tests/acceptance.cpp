// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
#include <iostream>

#include "movwave/verify.hpp"

int main() {
  bool ok = true;
  for (const auto& c : movwave::verify::run_all()) {
    std::cout << movwave::verify::format_line(c) << std::endl;
    ok = ok && c.pass();
  }
  return ok ? 0 : 1;
}
