#include "../src/cli/app.hpp"

int main(int argc, char** argv) { return coldatom::cli::run(argc, argv); }
