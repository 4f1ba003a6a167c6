#include <iostream>

#include "gei/cli.hpp"

int main(int argc, char** argv) {
    return gei::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
