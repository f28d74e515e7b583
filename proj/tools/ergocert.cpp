/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/report.hpp"

int main(int argc, char** argv) { return ergocert::cli_main(argc, argv); }
