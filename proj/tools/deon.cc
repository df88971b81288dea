#include <iostream>

#include "deon/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return deon::run(args, std::cout, std::cerr);
}
