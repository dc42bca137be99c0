#include "levy/cli.hpp"

int main(int argc, char** argv) { return levy::cli::main_entry(argc, argv); }
