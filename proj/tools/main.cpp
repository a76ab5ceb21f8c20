#include <iostream>

#include "cardiofem/cli.hpp"

int main(int argc, char** argv) {
  return cardiofem::cli::run(argc, argv, std::cout, std::cerr);
}
