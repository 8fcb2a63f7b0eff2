#include "extdiff/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return extdiff::cli::run(argc, argv, std::cout, std::cerr); }
