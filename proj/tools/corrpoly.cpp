#include <iostream>
#include <string>
#include <vector>

#include "corrpoly/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return corrpoly::cli::run(args, std::cout, std::cerr);
}
