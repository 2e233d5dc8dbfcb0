#include <iostream>
#include <string>
#include <vector>

#include "topologic/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return topologic::cli::run(args, std::cout, std::cerr);
}
