#include <iostream>

#include "fuzzy_casimir/cli.hpp"

int main(int argc, char** argv) {
  return fuzzy_casimir::cli::run(argc, argv, std::cout, std::cerr);
}
