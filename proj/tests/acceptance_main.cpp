// Runs every acceptance criterion at full sample counts and prints one
// pass/fail line per criterion. Exit status 0 only if all pass.

#include <cstdio>

#include "treetribes/verify.hpp"

int main() {
  treetribes::VerifyOptions opt;
  bool all_ok = true;
  for (const treetribes::CriterionResult& res : treetribes::run_acceptance(opt)) {
    std::printf("%s  C%02d %-26s (%.2fs)  %s\n", res.passed ? "PASS" : "FAIL", res.id,
                res.name.c_str(), res.seconds, res.detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && res.passed;
  }
  std::printf("%s\n", all_ok ? "all criteria passed" : "SOME CRITERIA FAILED");
  return all_ok ? 0 : 1;
}
