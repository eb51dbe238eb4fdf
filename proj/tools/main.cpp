#include <iostream>

#include "rrie/cli.hpp"

int main(int argc, char** argv) { return rrie::run_cli(argc, argv, std::cout, std::cerr); }
