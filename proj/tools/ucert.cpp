#include <iostream>

#include "ucert/cli.hpp"

int main(int argc, char** argv) { return ucert::cli::dispatch(argc, argv, std::cout, std::cerr); }
