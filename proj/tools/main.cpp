#include "commands.hpp"

int main(int argc, char** argv) { return arrival::cli::run_cli(argc, argv); }
