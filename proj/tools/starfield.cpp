#include <iostream>
#include <string>
#include <vector>

#include "starfield/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return starfield::cli::run_cli(args, std::cout, std::cerr);
}
