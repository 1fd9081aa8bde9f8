#include <iostream>

#include "pclab/cli.hpp"

int main(int argc, char** argv)
{
    return pclab::cli::run(argc, argv, std::cout, std::cerr);
}
