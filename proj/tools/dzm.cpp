#include <iostream>

#include "dzm/cli/commands.hpp"

int main(int argc, char** argv) { return dzm::cli::run(argc, argv, std::cout, std::cerr); }
