#include <iostream>

#include "plike/cli.hpp"

int main(int argc, char** argv) { return plike::run_cli(argc, argv, std::cout, std::cerr); }
