#include "simplexwalk/cli.hpp"

int main(int argc, char** argv) { return swalk::cli::run_cli(argc, argv); }
