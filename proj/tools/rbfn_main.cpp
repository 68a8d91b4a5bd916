#include "rbfn/cli.hpp"

int main(int argc, char** argv) { return rbfn::cli::run(argc, argv); }
