#include "halfline/cli.hpp"

int main(int argc, char** argv) { return halfline::run_cli(argc, argv); }
