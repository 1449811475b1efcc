#include "cli.hpp"

int main(int argc, char** argv) { return urbanet::cli::run(argc, argv); }
