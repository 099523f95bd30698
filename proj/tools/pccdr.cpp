#include <iostream>

#include "pccdr/cli.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return pccdr::cli::run(argc, argv, std::cout, std::cerr);
}
