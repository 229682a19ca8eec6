#include <iostream>

#include "cgen/cli.hpp"

int main(int argc, char** argv) { return cgen::run_cli(argc, argv, std::cout, std::cerr); }
