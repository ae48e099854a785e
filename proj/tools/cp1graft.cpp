#include "cp1/cli.hpp"

int main(int argc, char** argv) { return cp1::cli::run(argc, argv); }
