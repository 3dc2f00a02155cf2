#include "runge/experiments.hpp"

int main(int argc, char** argv) { return runge::run_cli(argc, argv); }
