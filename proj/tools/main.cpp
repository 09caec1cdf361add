#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return qal::cli::run(argc, argv, std::cout, std::cerr); }
