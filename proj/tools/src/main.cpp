#include <iostream>

#include "hats_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hats::cli::run(args, std::cout, std::cerr);
}
