#include <iostream>

#include "primlen/cli.hpp"

int main(int argc, char** argv) { return primlen::run(argc, argv, std::cout, std::cerr); }
