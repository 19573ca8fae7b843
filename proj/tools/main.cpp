#include "cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return mtcli::run(argc, argv, std::cout, std::cerr); }
