#include "priorpaint/cli.hpp"

int main(int argc, char** argv) { return priorpaint::cli::run(argc, argv); }
