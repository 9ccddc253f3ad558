#include <iostream>

#include "prcone/cli.hpp"

int main(int argc, char** argv) {
  return prcone::run_cli(argc, argv, std::cout, std::cerr);
}
