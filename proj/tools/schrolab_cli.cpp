#include "schrolab/cli.hpp"

int main(int argc, char** argv) { return schrolab::cli_main(argc, argv); }
