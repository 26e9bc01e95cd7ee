#include <iostream>

#include "dscale/cli.hpp"

int main(int argc, char** argv) { return dscale::cli::run(argc, argv, std::cout, std::cerr); }
