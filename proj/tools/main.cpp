#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return qutrit::cli::run_main(argc, argv, std::cout, std::cerr); }
