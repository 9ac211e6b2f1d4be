#include <unistd.h>

#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return goi::cli::run(args, std::cin, std::cout, std::cerr, isatty(0) != 0);
}
