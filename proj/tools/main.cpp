#include "cli.hpp"

int main(int argc, char** argv) { return hrtlab::cli::run(argc, argv); }
