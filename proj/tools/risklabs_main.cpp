#include "risklabs/cli/app.hpp"

int main(int argc, char** argv) { return risklabs::cli::run(argc, argv); }
