#include <iostream>

#include "wsn_cli/app.hpp"

int main(int argc, char** argv) { return wsn::cli::run_app(argc, argv, std::cerr); }
