#include <iostream>

#include "caustic/verify.hpp"

// One line per acceptance criterion; an optional argument names a JSON report file.
int main(int argc, char** argv) {
  using namespace caustic;
  std::uint64_t seed = property_seed();
  VerifyReport rep = verify_suite(Tolerances{}, seed);
  std::cout << "seed " << seed << "\n";
  for (const auto& c : rep.criteria) {
    std::cout << summary_line(c) << "\n";
    for (const auto& m : c.measurements)
      std::cout << "    " << m.quantity << ": " << m.measured << " (expected " << m.expected
                << (m.tolerance.empty() || m.tolerance == "exact" ? "" : ", tol " + m.tolerance) << ")"
                << (m.ok ? "" : "  <- fails") << "\n";
  }
  if (argc > 1) write_file(argv[1], canonical(to_json(rep)));
  std::cout << (rep.ok() ? "acceptance: all criteria pass" : "acceptance: FAILED") << "\n";
  return rep.ok() ? 0 : 1;
}
