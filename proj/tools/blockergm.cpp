#include "blockergm/cli.hpp"

int main(int argc, char** argv) { return blockergm::run_cli(argc, argv); }
