#include "eocc_cli.hpp"

int main(int argc, char** argv) { return eocc::cli::run(argc, argv); }
