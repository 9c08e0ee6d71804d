// Acceptance suite: runs every criterion and prints one pass/fail line each.
// Exit code 0 only if all criteria pass.

#include <cstdio>

#include "nullcurve/verify.hpp"

int main() {
    auto rep = nullcurve::verify::run_suite("all");
    nullcurve::verify::print_report(rep, stdout);
    return rep.all_pass ? 0 : 1;
}
