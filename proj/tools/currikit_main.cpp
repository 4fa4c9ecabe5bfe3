#include <string>
#include <vector>

#include "currikit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return currikit::run_cli(args);
}
