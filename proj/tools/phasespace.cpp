#include "phasespace/cli/app.hpp"

int main(int argc, char** argv) { return phasespace::cli::run(argc, argv); }
