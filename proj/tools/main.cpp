#include <string>
#include <vector>

#include "circlefeat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return circlefeat::run_cli(args);
}
