#include <iostream>

#include "slabxrt/cli.hpp"

int main(int argc, char** argv) { return slabxrt::run_cli(argc, argv, std::cout, std::cerr); }
