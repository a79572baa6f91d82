#include "fsde/cli.hpp"

int main(int argc, char** argv) { return fsde::cli::run(argc, argv); }
