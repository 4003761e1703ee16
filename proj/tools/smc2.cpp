#include <iostream>

#include "smc2/cli.hpp"

int main(int argc, char** argv) { return smc2::cli_main(argc, argv, std::cout, std::cerr); }
