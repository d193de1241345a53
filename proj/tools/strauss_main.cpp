#include "strauss/cli.hpp"

int main(int argc, char** argv) { return strauss::run_cli(argc, argv); }
