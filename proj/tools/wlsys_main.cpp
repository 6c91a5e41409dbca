#include <iostream>

#include "wlsys/cli.hpp"

int main(int argc, char** argv) { return wlsys::cli_main(argc, argv, std::cout, std::cerr); }
