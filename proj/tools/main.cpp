#include <vector>
#include <string>

#include "susyspec/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return susyspec::run_cli(args);
}
