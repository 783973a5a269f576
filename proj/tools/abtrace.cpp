#include "abtrace/cli.hpp"

int main(int argc, char** argv) { return abtrace::cli::run(argc, argv); }
