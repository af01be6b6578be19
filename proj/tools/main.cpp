#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  return n2rpp::cli::run(argc, argv, std::cout, std::cerr);
}
