#include <iostream>

#include "lempertlab/cli.hpp"

int main(int argc, char** argv) { return lempertlab::run_cli(argc, argv, std::cout, std::cerr); }
