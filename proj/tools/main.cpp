#include <iostream>

#include "oac/cli.hpp"

int main(int argc, char** argv) {
  return oac::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
