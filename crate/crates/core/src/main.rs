// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(kpo_spectro::cli::main_with_args(std::env::args_os()));
}
