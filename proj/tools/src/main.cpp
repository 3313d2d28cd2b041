#include <iostream>

#include "sublin_cli/cli.hpp"

int main(int argc, char** argv) { return sublin::cli::run(argc, argv, std::cout, std::cerr); }
