#include <exception>
#include <iostream>
#include <vector>

#include "nmd/cli.hpp"
#include "nmd/errors.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return nmd::run(nmd::parse_args(args));
  } catch (const nmd::HelpRequested& help) {
    std::cout << help.text();
    return 0;
  } catch (const nmd::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const nmd::DivergenceError& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return 4;
  } catch (const nmd::DegeneracyError& e) {
    std::cerr << "clustering degeneracy: " << e.what() << "\n";
    return 5;
  } catch (const nmd::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
