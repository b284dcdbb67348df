#include <iostream>

#include "qgnn/cli.hpp"

int main(int argc, char** argv) { return qgnn::cli::run(argc, argv, std::cout, std::cerr); }
