#include <iostream>

#include "densitylab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return densitylab::run_command(args, std::cout, std::cerr);
}
