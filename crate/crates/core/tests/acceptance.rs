//! Runs the full acceptance grid and prints one line per criterion.
//!
//! `POLYFORM_SEED` overrides the default seed; `POLYFORM_CRITERIA` takes a
//! comma-separated subset such as `1,7,12`.

use std::process::ExitCode;

use polyform::selftest;

fn main() -> ExitCode {
    let seed = std::env::var("POLYFORM_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(2024);
    let ids: Vec<u8> = match std::env::var("POLYFORM_CRITERIA") {
        Ok(list) => list
            .split(',')
            .filter_map(|s| s.trim().parse().ok())
            .collect(),
        Err(_) => (1..=14).collect(),
    };
    println!("acceptance: {} criteria, seed {seed}", ids.len());
    let results = selftest::run(&ids, seed);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
