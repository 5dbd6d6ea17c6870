#include <iostream>

#include "noderank/cli.hpp"

int main(int argc, char** argv) {
  return noderank::cli::dispatch(argc, argv, std::cout, std::cerr);
}
