#include <iostream>
#include <string>
#include <vector>

#include "uprod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return uprod::run_cli(args, std::cout, std::cerr);
}
