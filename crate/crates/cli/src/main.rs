// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qdsim_cli::run(std::env::args_os()))
}
