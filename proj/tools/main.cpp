#include "sbqa/cli.hpp"

int main(int argc, char** argv) { return sbqa::run_cli(argc, argv); }
