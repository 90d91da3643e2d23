#include "minvarx/cli.hpp"

int main(int argc, char** argv) { return minvarx::cli::run(argc, argv); }
