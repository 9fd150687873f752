#include "hesn/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hesn::run_cli(argc, argv, std::cout, std::cerr); }
