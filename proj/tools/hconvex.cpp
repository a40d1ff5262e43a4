#include <iostream>
#include <string>
#include <vector>

#include "hconvex/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return hconvex::run(args, std::cout, std::cerr);
}
