#include <iostream>

#include "hqvi/cli.hpp"

int main(int argc, char** argv) { return hqvi::cli::run(argc, argv, std::cout, std::cerr); }
