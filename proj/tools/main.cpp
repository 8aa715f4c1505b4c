#include <string>
#include <vector>

#include "droneflow_cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return droneflow_cli::run_cli(args);
}
