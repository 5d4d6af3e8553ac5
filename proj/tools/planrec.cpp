#include <iostream>

#include "planrec/app/cli.hpp"

int main(int argc, char** argv) { return planrec::app::cli_main(argc, argv, std::cout, std::cerr); }
