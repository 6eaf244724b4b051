#include <iostream>
#include <string>
#include <vector>

#include "microcosm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return microcosm::cli::main_entry(args, std::cout, std::cerr);
}
