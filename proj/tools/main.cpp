#include "pdmp/cli/run.hpp"

int main(int argc, char** argv) { return pdmp::cli::main(argc, argv); }
