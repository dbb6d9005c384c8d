#include <iostream>
#include <string>
#include <vector>

#include "evid/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return evid::cli::run(args, std::cout, std::cerr);
}
