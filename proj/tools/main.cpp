#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return fractspec::cli::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
