#include "redrep/cli.hpp"

int main(int argc, char** argv) { return redrep::cli::run(argc, argv); }
