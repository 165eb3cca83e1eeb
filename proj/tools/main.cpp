#include "cli_app.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    return fracback::cli::run_cli(argc, argv, std::cout, std::cerr, std::getenv("FRACBACK_OUT"));
}
