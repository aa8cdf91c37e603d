// Runs every acceptance criterion at full size and prints one line per
// criterion. Exit status is nonzero if any criterion fails.
//
//   cewc_acceptance [--report path.json] [--seed N] [--parallelism K]

#include "cewc/verify.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

int main(int argc, char** argv)
{
    cewc::verify::Options opt;
    opt.parallelism = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    std::string report_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (i + 1 >= argc) {
            std::cerr << "missing value for " << arg << '\n';
            return 2;
        }
        if (arg == "--report") report_path = argv[++i];
        else if (arg == "--seed") opt.seed = std::stoull(argv[++i]);
        else if (arg == "--parallelism") opt.parallelism = std::stoi(argv[++i]);
        else {
            std::cerr << "unknown argument " << arg << '\n';
            return 2;
        }
    }

    const auto report = cewc::verify::run_verification(cewc::verify::Level::Full, opt, [](const auto& c) {
        std::cout << cewc::verify::summary_line(c) << '\n' << "       " << c.measured.dump() << '\n' << std::flush;
    });

    std::size_t passed = 0;
    for (const auto& c : report.criteria) passed += c.passed;
    std::cout << passed << "/" << report.criteria.size() << " acceptance criteria passed\n";

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << cewc::verify::to_json(report).dump(2) << '\n';
    }
    return report.passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}
