#include <iostream>

#include "mqssd/commands.hpp"

int main(int argc, char** argv) {
  return mqssd::cli::run_cli(argc, argv, std::cout, std::cerr);
}
