#include <cstdio>

#include "criteria.hpp"

int main()
{
    modcup::acceptance::SuiteConfig config;
    config.reference_path = MODCUP_TABLE_REF;
    int failed = 0;
    modcup::acceptance::run_suite(config, {}, [&](const modcup::acceptance::Outcome& o) {
        std::printf("%s\n", modcup::acceptance::format_outcome(o).c_str());
        std::fflush(stdout);
        if (!o.pass)
            ++failed;
    });
    std::printf("%d of 9 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
