#include "blockopp/cli.hpp"

int main(int argc, char **argv) { return blockopp::cli::run(argc, argv); }
