#include <iostream>

#include "cpsten/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cps::run_cli(args, std::cout, std::cerr);
}
