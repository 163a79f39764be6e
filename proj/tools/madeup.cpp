#include "madeup/cli.hpp"

int main(int argc, char** argv) { return madeup::cli::main(argc, argv); }
