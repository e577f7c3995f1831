#include <iostream>

#include "artin/cli.hpp"

int main(int argc, char** argv) { return artin::cli_main(argc, argv, std::cout, std::cerr); }
