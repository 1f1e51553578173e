#include "mpoc/cli.hpp"

int main(int argc, char** argv) { return mpoc::run_cli(argc, argv); }
