#include "rbez/cli.hpp"

int main(int argc, char** argv) { return rbez::run(argc, argv); }
