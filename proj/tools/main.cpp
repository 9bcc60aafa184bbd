#include "cavchain/cli_app.hpp"

int main(int argc, char** argv) { return cavchain::main_cli(argc, argv); }
