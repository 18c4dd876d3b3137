#include <iostream>

#include "sensorsel/cli.hpp"

int main(int argc, char** argv) { return sensorsel::cli::run(argc, argv, std::cout, std::cerr); }
