#include <iostream>

#include "wentropy/cli.hpp"

int main(int argc, char** argv) { return wentropy::cli_main(argc, argv, std::cout, std::cerr); }
