#include <iostream>
#include <string>
#include <vector>

#include "minctrl/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const minctrl::cli::CommandOutput res = minctrl::cli::run(args);
  std::cout << res.out;
  std::cerr << res.err;
  return res.exit_code;
}
