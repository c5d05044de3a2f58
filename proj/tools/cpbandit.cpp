#include <iostream>
#include <string>
#include <vector>

#include "cpbandit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cpbandit::cli::run_cli(args, std::cout, std::cerr);
}
