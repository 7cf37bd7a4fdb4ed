#include "cli.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv)
{
    return deba::cli::main(argc, argv, std::cout, std::cerr, std::getenv("DEBA_SEED"));
}
