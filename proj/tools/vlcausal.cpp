#include "vlc/cli.hpp"

int main(int argc, char** argv) { return vlc::cli::run(argc, argv); }
