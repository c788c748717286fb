#include "cli.hpp"

int main(int argc, char** argv) { return asianmc_cli::run(argc, argv); }
