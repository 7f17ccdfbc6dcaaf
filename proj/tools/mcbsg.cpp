#include "mcbsg/cli.hpp"

int main(int argc, char** argv) { return mcbsg::cli::execute_command(argc, argv); }
