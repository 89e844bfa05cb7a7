#include <iostream>

#include "ywx/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ywx::run(args, std::cout, std::cerr);
}
