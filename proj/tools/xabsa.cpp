// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The xabsa Authors

#include "xabsa/pipeline.hpp"

int main(int argc, char** argv) { return xabsa::pipeline::run_cli(argc, argv); }
