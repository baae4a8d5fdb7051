#include <iostream>

#include "breakup/cli.hpp"

int main(int argc, char** argv) { return breakup::dispatch(argc, argv, std::cout, std::cerr); }
