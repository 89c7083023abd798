#include <iostream>
#include <string>
#include <vector>

#include "ransomgame/cli.hpp"

int main(int argc, char** argv) {
    ransomgame::cli::configure_logging();
    std::vector<std::string> args(argv + 1, argv + argc);
    return ransomgame::cli::run(args, std::cout, std::cerr);
}
