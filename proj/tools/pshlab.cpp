#include <pshlab/cli.hpp>

int main(int argc, char** argv) { return pshlab::run_cli(argc, argv); }
