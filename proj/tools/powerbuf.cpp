#include <iostream>

#include "powerbuf/cli.hpp"

int main(int argc, char** argv) { return powerbuf::run_cli(argc, argv, std::cout, std::cerr); }
