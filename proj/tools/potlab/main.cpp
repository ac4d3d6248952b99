#include <iostream>

#include "potlab/commands.hpp"

int main(int argc, char** argv) { return potlab::cli::main_entry(argc, argv, std::cout, std::cerr); }
