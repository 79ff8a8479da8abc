#include "paircorr/cli.hpp"

int main(int argc, char** argv) { return paircorr::run_cli(argc, argv); }
