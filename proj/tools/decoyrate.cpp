#include "decoy/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return decoy::cli::run(argc, argv, std::cout, std::cerr);
}
