#include <iostream>

#include "streambank/cli/commands.hpp"

int main(int argc, char** argv) {
  return streambank::cli::run(argc, argv, std::cout, std::cerr);
}
