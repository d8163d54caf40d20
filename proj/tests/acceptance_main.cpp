#include <cstdlib>
#include <cstring>
#include <iostream>

#include "meanfield/acceptance.hpp"

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: " << argv[0] << " [--criterion N]\n";
            return 2;
        }
    }
    try {
        if (only > 0) {
            meanfield::CriterionResult res = meanfield::run_criterion(only);
            std::cout << (res.passed ? "PASS" : "FAIL") << " " << res.index << " "
                      << res.name << "  " << res.detail << "\n";
            return res.passed ? 0 : 1;
        }
        return meanfield::run_all_criteria(std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
