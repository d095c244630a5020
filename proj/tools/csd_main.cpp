#include <iostream>
#include <string>
#include <vector>

#include "csd/csv_io.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return csd::cli_main(args, std::cout, std::cerr);
}
