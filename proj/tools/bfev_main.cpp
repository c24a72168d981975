#include <iostream>

#include "bfev/cli.hpp"

int main(int argc, char** argv) { return bfev::run_cli(argc, argv, std::cout, std::cerr); }
