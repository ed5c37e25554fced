#include <iostream>

#include "gtm/cli.hpp"

int main(int argc, char** argv) { return gtm::run_cli(argc, argv, std::cout, std::cerr); }
