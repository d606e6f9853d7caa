#include "dgmv/cli.hpp"

int main(int argc, char** argv) { return dgmv::cli::run(argc, argv); }
