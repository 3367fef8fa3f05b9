// Acceptance suite: one line per criterion, nonzero exit on any failure.
//   klt_acceptance [--quick] [criterion ids...]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "klt/acceptance.hpp"

int main(int argc, char** argv) {
  klt::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--quick")
      options.quick = true;
    else {
      char* end = nullptr;
      const long id = std::strtol(arg.c_str(), &end, 10);
      if (arg.empty() || *end != '\0' || id < 1 || id > 11) {
        std::fprintf(stderr, "usage: klt_acceptance [--quick] [criterion ids 1..11]\n");
        return 2;
      }
      options.only.push_back(static_cast<int>(id));
    }
  }
  int failures = 0;
  klt::run_acceptance(options, [&](const klt::CriterionResult& r) {
    std::printf("%s\n", klt::format_criterion(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  });
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
