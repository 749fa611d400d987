#include <iostream>

#include "perfectst/cli.hpp"

int main(int argc, char** argv) { return perfectst::run_cli(argc, argv, std::cout, std::cerr); }
