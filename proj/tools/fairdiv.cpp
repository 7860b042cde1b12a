#include "fairdiv/cli.hpp"

int main(int argc, char** argv) { return fairdiv::cli::run(argc, argv); }
