#include <iostream>
#include <string>
#include <vector>

#include "bse/cli_commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bse::run_cli(args, std::cout, std::cerr);
}
