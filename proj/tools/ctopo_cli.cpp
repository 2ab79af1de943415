#include <iostream>

#include "ctopo/cli.hpp"

int main(int argc, char** argv) { return ctopo::cli::run_cli(argc, argv, std::cout, std::cerr); }
