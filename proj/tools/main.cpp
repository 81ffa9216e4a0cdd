#include <iostream>

#include "stdrep/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return stdrep::cli::run(args, std::cout, std::cerr);
}
