#include <iostream>

#include "cuspsum/cli.hpp"

int main(int argc, char** argv) { return cuspsum::cli::run(argc, argv, std::cout, std::cerr); }
