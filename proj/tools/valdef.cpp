#include "valdef/cli.hpp"

int main(int argc, char** argv) { return valdef::cli::run_cli(argc, argv); }
