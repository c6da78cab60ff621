#include <iostream>
#include <string>
#include <vector>

#include "logcartier/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return logcartier::run_cli(args, std::cout, std::cerr);
}
