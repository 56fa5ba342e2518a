#include <iostream>
#include <string>
#include <vector>

#include "speclab/lab.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return speclab::run_command(args, std::cout, std::cerr);
}
