#include <iostream>
#include <string>
#include <vector>

#include "rqsl/cli/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rqsl::cli::run_subcommand(args, std::cerr);
}
