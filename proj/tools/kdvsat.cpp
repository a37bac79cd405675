#include "kdvsat/cli.hpp"

int main(int argc, char** argv) { return kdvsat::cli::main(argc, argv); }
