// Runs the ten acceptance criteria and prints one line per criterion.

#include <cstdlib>
#include <iostream>

#include "tessella/acceptance.hpp"

int main(int argc, char** argv) {
  tessella::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) options.only.push_back(std::atoi(argv[i]));
  options.on_result = [](const tessella::CriterionResult& r) { std::cout << tessella::format_result(r) << std::endl; };
  bool all = true;
  for (const auto& r : tessella::run_acceptance(options)) all = all && r.pass;
  return all ? 0 : 1;
}
