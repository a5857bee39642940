//! Process-wide tuning knobs for multiplication dispatch.

use std::sync::RwLock;

/// Thresholds selecting the multiplication algorithm.
///
/// * operands of truncated length at most `schoolbook_max` use the quadratic
///   convolution;
/// * when `nnz(f) * nnz(g) <= sparse_factor * len * log2(len)` the product is
///   formed from the nonzero pairs only (this is how the lacunarity of theta
///   and of series in `q^4` is exploited);
/// * everything else goes through the multi-modular number-theoretic
///   transform, parallelised over primes when `parallel` is set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MulConfig {
    pub schoolbook_max: usize,
    pub sparse_factor: f64,
    pub parallel: bool,
}

impl MulConfig {
    pub const DEFAULT: MulConfig = MulConfig {
        schoolbook_max: 32,
        sparse_factor: 2.0,
        parallel: false,
    };
}

impl Default for MulConfig {
    fn default() -> Self {
        Self::DEFAULT
    }
}

static CONFIG: RwLock<MulConfig> = RwLock::new(MulConfig::DEFAULT);

pub fn mul_config() -> MulConfig {
    *CONFIG.read().unwrap()
}

pub fn set_mul_config(cfg: MulConfig) {
    *CONFIG.write().unwrap() = cfg;
}
