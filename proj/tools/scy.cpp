#include "cli/cli.hpp"

int main(int argc, char** argv) { return scy::cli::run(argc, argv); }
