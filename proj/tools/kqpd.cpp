#include <iostream>
#include <string>
#include <vector>

#include "kqpd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return kqpd::run_cli(args, std::cout, std::cerr);
}
