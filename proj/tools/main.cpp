// Copyright 2026 The spsatune Authors.
// SPDX-License-Identifier: Apache-2.0

#include <csignal>
#include <iostream>

#include "cli.hpp"

namespace {

extern "C" void on_signal(int) { spsatune::cli::stop_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::vector<std::string> args(argv + 1, argv + argc);
  return spsatune::cli::run(args, std::cout, std::cerr);
}
