#include <iostream>

#include "gmetric/cli.hpp"

int main(int argc, char** argv) { return gmetric::cli::run(argc, argv, std::cout, std::cerr); }
