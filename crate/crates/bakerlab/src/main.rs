//! Command-line entry point: wires configs to the library modules and emits
//! JSON/CSV/PPM artifacts.
//!
//! Exit codes: 0 success, 2 validation or usage failure, 3 mathematical
//! check failure (bounds violated, search exhausted, classification
//! inconclusive).

mod commands;

fn main() {
    std::process::exit(commands::run());
}
