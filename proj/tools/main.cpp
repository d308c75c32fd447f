#include <iostream>
#include <string>
#include <vector>

#include "lmtt/driver.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lmtt::run(args, std::cout, std::cerr);
}
