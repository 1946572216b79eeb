//! Shared fixtures for the engine benchmarks.

use pressurelab::{Potential, SftSystem};

/// `(name, system, potential)` triples used across benchmarks.
pub fn fixtures() -> Vec<(&'static str, SftSystem, Potential)> {
    let full = SftSystem::full_shift(2, 0.5).expect("full shift");
    let golden = SftSystem::golden_mean(0.5).expect("golden mean");
    let beta = Potential::first_symbol(&full, vec![0.0, 1.0]).expect("potential");
    vec![
        ("full2", full.clone(), Potential::zero(&full)),
        ("full2-beta", full, beta),
        ("golden", golden.clone(), Potential::zero(&golden)),
    ]
}
