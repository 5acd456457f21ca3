#include "selqed/cli.hpp"

int main(int argc, char** argv) { return selqed::cli::run_main(argc, argv); }
