#include <string>
#include <vector>

#include "ri/runner.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ri::cli_main(args);
}
