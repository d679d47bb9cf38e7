#include "zsnn/harness/cli.hpp"

int main(int argc, char** argv) { return zsnn::cli_main(argc, argv); }
