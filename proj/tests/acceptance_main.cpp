// Runs the eight acceptance criteria, one line each; exit 1 if any fails.

#include "abtrace/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

int main(int argc, char** argv) {
    abtrace::acceptance::Options options;
    options.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (argc > 1) options.threads = std::max(1, std::atoi(argv[1]));
    bool all = true;
    abtrace::acceptance::run_all(options, [&](const abtrace::acceptance::CriterionResult& r) {
        abtrace::acceptance::print(std::cout, r);
        std::cout.flush();
        all = all && r.pass;
    });
    std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << '\n';
    return all ? 0 : 1;
}
