#include "hamflow/cli.hpp"

int main(int argc, char** argv) { return hamflow::cli_main(argc, argv); }
