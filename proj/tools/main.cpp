#include "stochint/cli.hpp"

int main(int argc, char** argv) { return stochint::cli::run(argc, argv); }
