#include <minergy/cli_main.hpp>

int main(int argc, char** argv) { return minergy::cli::run_cli(argc, argv); }
