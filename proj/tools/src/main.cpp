#include <iostream>

#include "rtpca/cli.hpp"

int main(int argc, char** argv) { return rtpca::cli::run(argc, argv, std::cout, std::cerr); }
