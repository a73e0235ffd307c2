#include "thermo/cli.hpp"

int main(int argc, char** argv) { return thermo::cli::Run(argc, argv); }
