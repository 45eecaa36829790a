#include "pulse/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    pulse::CliContext ctx{std::cin, std::cout, std::cerr};
    return pulse::run_cli(args, ctx);
}
