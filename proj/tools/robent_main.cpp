#include "robent/io.hpp"

int main(int argc, char** argv) { return robent::io::cli_main(argc, argv); }
