#include <iostream>

#include "cli/cli.hpp"

int main(int argc, char** argv) {
  using namespace cjgsvd::cli;
  RunConfig config;
  try {
    config = parse_config(argc, argv);
  } catch (const HelpRequested& help) {
    std::cout << help.what();
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n(run with --help for the flag list)\n";
    return kUsage;
  }
  const RunResult result = run(config, std::cerr);
  if (result.exit_code != kOk) std::cerr << "error: " << result.message << '\n';
  return result.exit_code;
}
