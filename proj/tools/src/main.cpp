#include <iostream>

#include "ise_cli/commands.hpp"

int main(int argc, char** argv) {
  return ise::cli::run(argc, argv, std::cout, std::cerr);
}
