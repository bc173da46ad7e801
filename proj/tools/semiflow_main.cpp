#include <iostream>

#include "semiflow/cli.hpp"

int main(int argc, char** argv) {
  return semiflow::cli::run(argc, argv, std::cout, std::cerr);
}
