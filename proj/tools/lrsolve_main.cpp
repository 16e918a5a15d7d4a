#include "lrsolve/cli_commands.hpp"

int main(int argc, char** argv) { return lrsolve::cli::run_cli(argc, argv); }
