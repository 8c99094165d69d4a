#include "nilsphere/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return nilsphere::cli::run(argc, argv, std::cout, std::cerr); }
