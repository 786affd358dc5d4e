#include <cstdio>
#include <cstdlib>
#include <string>

#include "bsl/acceptance.hpp"
#include "bsl/errors.hpp"

// Usage: acceptance_tests [suite]   (default: all)
int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  try {
    int failed = 0;
    for (int id : bsl::acceptance::suite_ids(suite)) {
      const auto r = bsl::acceptance::run(id);
      std::printf("%s\n", bsl::acceptance::format_line(r).c_str());
      std::fflush(stdout);
      failed += r.pass ? 0 : 1;
    }
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
  } catch (const bsl::Error& e) {
    std::fprintf(stderr, "error %s: %s\n", std::string(bsl::to_string(e.code())).c_str(), e.what());
    return 2;
  }
}
