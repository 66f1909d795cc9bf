#include "ltst/cli.hpp"

int main(int argc, char** argv) { return ltst::cli::run(argc, argv); }
