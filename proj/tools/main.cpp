#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return denise::cli::run(argc, argv, std::cout, std::cerr, std::cin);
}
