#include <iostream>
#include <string>
#include <vector>

#include "behavior_metrics/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bmetrics::cli::run(args, std::cout, std::cerr);
}
