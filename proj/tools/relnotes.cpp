#include <iostream>

#include "relnotes/cli.hpp"

int main(int argc, char** argv) { return relnotes::cli::run(argc, argv, std::cout, std::cerr); }
