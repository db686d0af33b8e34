// Acceptance run: every registered suite at its pinned seed and full size.
#include <chrono>
#include <cstdio>
#include <thread>

#include "cmin/suites.hpp"

int main()
{
    cmin::SuiteConfig cfg;
    cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    int failed = 0;
    int criterion = 0;
    for (const auto& suite : cmin::registered_suites())
    {
        ++criterion;
        const auto start = std::chrono::steady_clock::now();
        bool ok = true;
        std::vector<cmin::StatReport> reports;
        try
        {
            reports = suite.run(cfg);
        }
        catch (const std::exception& e)
        {
            std::printf("  %s: exception: %s\n", suite.name.c_str(), e.what());
            ok = false;
        }
        for (const auto& r : reports)
        {
            ok = ok && r.passed;
            std::printf("    %-40s stat=%-12.6g p=%-10s %s\n", r.test_name.c_str(), r.statistic,
                        r.p_value ? std::to_string(*r.p_value).c_str() : "-", r.passed ? "ok" : "FAILED");
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d %-20s (%.1fs)\n", ok ? "PASS" : "FAIL", criterion, suite.name.c_str(), secs);
        std::fflush(stdout);
        if (!ok)
            ++failed;
    }
    std::printf("%d of %d criteria passed\n", criterion - failed, criterion);
    return failed == 0 ? 0 : 1;
}
