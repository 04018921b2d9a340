#include <iostream>
#include <string>
#include <vector>

#include "trendband/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return trendband::run_cli(args, std::cout, std::cerr);
}
