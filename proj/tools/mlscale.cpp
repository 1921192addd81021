#include "mlscale/cli.hpp"

int main(int argc, char** argv) { return mlscale::cli::dispatch(argc, argv); }
