#include <iostream>
#include <string>
#include <vector>

#include "pwsharp_cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pwsharp::cli::run(args, std::cout, std::cerr);
}
