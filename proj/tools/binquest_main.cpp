#include "binquest/pipeline.hpp"

int main(int argc, char** argv) { return binquest::run_cli(argc, argv); }
