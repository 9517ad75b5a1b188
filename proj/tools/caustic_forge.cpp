#include <iostream>

#include "caustic/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return caustic::run_command(args, std::cout, std::cerr);
}
