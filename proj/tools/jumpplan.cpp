#include <iostream>

#include "jumpplan/cli.hpp"

int main(int argc, char** argv) {
  return jumpplan::cli::run(argc, argv, std::cout, std::cerr);
}
