#include "cga/cli.hpp"

int main(int argc, char** argv) { return cga::cli_main(argc, argv); }
