#include <string>
#include <vector>

#include "wordwalks/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ww::cli::run(args);
}
