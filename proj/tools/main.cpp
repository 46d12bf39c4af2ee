#include "friedrichs_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return friedrichs::cli::run({argv + 1, argv + argc}, std::cerr);
}
