#include <iostream>
#include <string>
#include <vector>

#include "hullpeel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hullpeel::cli::run(args, std::cout, std::cerr);
}
