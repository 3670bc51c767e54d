#include <iostream>

#include "owcad/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return owcad::run_cli(args, std::cin, std::cout, std::cerr);
}
