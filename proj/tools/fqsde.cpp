#include <iostream>

#include "fqsde/cli.hpp"

int main(int argc, char** argv) { return fqsde::run_cli(argc, argv, std::cout, std::cerr); }
