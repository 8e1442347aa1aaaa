#include <iostream>
#include <string>

#include "acslab/errors.hpp"
#include "acslab/runner.hpp"

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  try {
    return acslab::reproduce(suite, std::cout);
  } catch (const acslab::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
