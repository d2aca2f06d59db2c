#include <iostream>
#include <string>
#include <vector>

#include "linsysid/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return linsysid::cli_main(args, std::cout, std::cerr);
}
