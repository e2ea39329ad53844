#include <iostream>

#include "quasih/cli_app.hpp"

int main(int argc, char** argv) {
    return quasih::run_cli(argc, argv, std::cout, std::cerr);
}
