// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "mudk/cli.hpp"

int main(int argc, char** argv)
{
    return mudk::run_cli(argc, argv, std::cout, std::cerr);
}
