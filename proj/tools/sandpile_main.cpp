#include <iostream>

#include "sandpile/cli.hpp"

int main(int argc, char** argv) { return sandpile::run_command(argc, argv, std::cout, std::cerr); }
