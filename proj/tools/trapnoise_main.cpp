#include <iostream>

#include "trapnoise/cli.hpp"

int main(int argc, char** argv) {
    return trapnoise::run_cli(argc, argv, std::cout, std::cerr);
}
