#include <iostream>

#include "convexform/cli.hpp"

int main(int argc, char** argv) { return convexform::run_cli(argc, argv, std::cout, std::cerr); }
