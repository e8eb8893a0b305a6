#include <iostream>

#include "lpd/cli.hpp"

int main(int argc, char** argv) { return lpd::run_cli(argc, argv, std::cout, std::cerr); }
