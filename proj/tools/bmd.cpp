#include <iostream>

#include "bmd/cli.hpp"

int main(int argc, char** argv) { return bmd::cli::run(argc, argv, std::cout, std::cerr); }
