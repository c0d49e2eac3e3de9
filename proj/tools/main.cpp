#include <iostream>

#include "spectone/cli.hpp"

int main(int argc, char** argv) { return spectone::cli::run(argc, argv, std::cout, std::cerr); }
