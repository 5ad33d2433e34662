#include "drcc/cli.hpp"

int main(int argc, char** argv) { return drcc::dispatch(argc, argv); }
