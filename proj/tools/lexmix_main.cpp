#include "lexmix/cli.h"

int main(int argc, char** argv) { return lexmix::cli::run(argc, argv); }
