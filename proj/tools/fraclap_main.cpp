#include "fraclap/harness.hpp"

#include <iostream>

int main(int argc, char** argv) { return fraclap::harness::run_cli(argc, argv, std::cout, std::cerr); }
