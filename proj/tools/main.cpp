#include <iostream>
#include <string>
#include <vector>

#include "safeql/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return safeql::dispatch(args, std::cout, std::cerr);
}
