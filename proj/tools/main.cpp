#include "invacc/commands.hpp"

int main(int argc, char** argv) { return invacc::run_cli(argc, argv); }
