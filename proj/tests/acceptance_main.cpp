// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Optional arguments select criteria by id or tag.
#include "ncbesq/acceptance.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> select(argv + 1, argv + argc);
    ncbesq::acceptance::Options opts;
    const auto results = ncbesq::acceptance::run(select, opts, &std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
