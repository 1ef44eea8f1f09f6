#include "hooke/cli/commands.hpp"

int main(int argc, char** argv) { return hooke::cli::main_entry(argc, argv); }
