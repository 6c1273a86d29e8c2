#include "sentgen/cli.hpp"

int main(int argc, char** argv) { return sentgen::cli::main(argc, argv); }
