#include <iostream>

#include "batchsim/cli.hpp"

int main(int argc, char** argv) { return batchsim::run_cli(argc, argv, std::cout, std::cerr); }
