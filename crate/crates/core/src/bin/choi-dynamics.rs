// SPDX-License-Identifier: Apache-2.0

use std::io::{stderr, stdout};

fn main() {
    let code = choi_dynamics::cli::run(
        std::env::args_os(),
        &mut stdout().lock(),
        &mut stderr().lock(),
    );
    std::process::exit(code);
}
