#include "detdepth/cli.hpp"

int main(int argc, char** argv) { return detdepth::cli::Main(argc, argv); }
