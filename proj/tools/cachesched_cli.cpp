#include <iostream>
#include <string>
#include <vector>

#include "cachesched/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cachesched::run_cli(args, std::cout, std::cerr);
}
