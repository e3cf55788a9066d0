#include <iostream>

#include "ncga/cli.hpp"

int main(int argc, char** argv) { return ncga::cli::run(argc, argv, std::cout, std::cerr); }
