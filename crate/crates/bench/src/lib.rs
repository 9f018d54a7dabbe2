//! Shared fixtures for the `nlse-core` benchmarks in `benches/`.

use nlse_core::ShellConfig;

/// The strongly reflecting shell used throughout: `a = 1`, `λ = 10`.
pub fn strong_shell() -> ShellConfig {
    ShellConfig::new(1.0, 10.0).expect("valid shell")
}

/// Evenly spaced arguments in `[lo, hi]`.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}
