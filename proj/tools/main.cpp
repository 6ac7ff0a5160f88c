#include "flexics/cli.hpp"

int main(int argc, char** argv) { return flexics::run_cli(argc, argv); }
