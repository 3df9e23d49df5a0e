#include <iostream>

#include "semdelta/cli.hpp"

int main(int argc, char** argv) { return semdelta::cli::run(argc, argv, std::cout, std::cerr); }
