// Acceptance gate: runs every criterion at the documented scale and prints
// one pass/fail line per criterion.  Exit code 0 only if all pass.
// WALKS_ACCEPT_LEVEL=quick switches to the reduced scale for local iteration.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "walks/validate.hpp"

int main() {
    const char* env = std::getenv("WALKS_ACCEPT_LEVEL");
    std::string level = env && std::strcmp(env, "quick") == 0 ? "quick" : "full";
    std::uint64_t seed = 1;
    if (const char* s = std::getenv("WALKS_SEED")) seed = std::strtoull(s, nullptr, 10);

    auto rep = walks::run_validation(level, seed);
    std::fputs(walks::report_to_text(rep).c_str(), stdout);
    return rep.all_pass ? 0 : 1;
}
