#include "commands.hpp"

int main(int argc, char** argv) { return dccanet::cli::main_entry(argc, argv); }
