// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Criterion 14 times the full and quick suites and reruns the quick suite to
// check that its report is byte-identical.

#include "santalo/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

using namespace santalo;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print(const CriterionResult& r)
{
    const char* status = r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL";
    std::printf("[%s] %2d %-34s %6.2fs  %s\n", status, r.id, r.name.c_str(), r.seconds, r.detail.c_str());
    std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv)
{
    bool quick_only = false;
    int only = 0;  // a single criterion 1-13, run in full mode
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) quick_only = true;
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    if (only >= 1 && only <= 13) {
        AcceptanceOptions opt;
        opt.only = {only};
        bool pass = true;
        for (const CriterionResult& r : run_acceptance(opt)) {
            print(r);
            pass = pass && r.pass;
        }
        return pass ? 0 : 1;
    }

    int failed = 0;
    double full_seconds = 0.0;
    if (!quick_only) {
        AcceptanceOptions full;
        const auto t0 = std::chrono::steady_clock::now();
        for (int id = 1; id <= 13; ++id) {
            full.only = {id};
            for (const CriterionResult& r : run_acceptance(full)) {
                print(r);
                failed += !r.pass;
            }
        }
        full_seconds = seconds_since(t0);
    }

    AcceptanceOptions quick;
    quick.quick = true;
    auto t0 = std::chrono::steady_clock::now();
    const auto first = run_acceptance(quick);
    const double quick_seconds = seconds_since(t0);
    const auto second = run_acceptance(quick);
    const std::string a = acceptance_report(first, quick), b = acceptance_report(second, quick);
    bool quick_pass = true;
    for (const CriterionResult& r : first) quick_pass = quick_pass && r.pass;
    if (quick_only)
        for (const CriterionResult& r : first) print(r);

    CriterionResult c14;
    c14.id = 14;
    c14.name = "runtime and determinism";
    c14.seconds = full_seconds + quick_seconds;
    const bool full_fast = quick_only || full_seconds < 120.0;
    c14.pass = full_fast && quick_seconds < 15.0 && a == b && quick_pass;
    char full_text[32] = "not run";
    if (!quick_only) std::snprintf(full_text, sizeof full_text, "%.1fs", full_seconds);
    char buf[256];
    std::snprintf(buf, sizeof buf, "full %s, quick %.1fs (%s), quick reports %s", full_text, quick_seconds,
                  quick_pass ? "all pass" : "failures", a == b ? "byte-identical" : "differ");
    c14.detail = buf;
    print(c14);
    failed += !c14.pass;

    std::printf("%s\n", failed == 0 ? "acceptance: all criteria passed" : "acceptance: some criteria failed");
    return failed == 0 ? 0 : 1;
}
