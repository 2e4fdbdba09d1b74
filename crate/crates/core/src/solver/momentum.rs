use num_traits::Float;

/// Rule generating the acceleration sequence α_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum MomentumRule {
    /// α₀ = 1, α_k = (1 + √(1 + 4α_{k−1}²))/2, so α_k² − α_k = α_{k−1}².
    #[default]
    FistaExact,
    /// α_k = (k+2)/2. Satisfies the recursion only approximately (off by ¼).
    Linear,
    /// α_k = 1 for all k: no momentum.
    Zero,
}

/// α_k for `rule`.
pub fn alpha_sequence(rule: MomentumRule, k: usize) -> f64 {
    AlphaIter::new(rule).nth(k).unwrap_or(1.0)
}

/// Infinite iterator over α₀, α₁, ...
#[derive(Debug, Clone)]
pub struct AlphaIter {
    rule: MomentumRule,
    k: usize,
    prev: f64,
}

impl AlphaIter {
    pub fn new(rule: MomentumRule) -> Self {
        AlphaIter { rule, k: 0, prev: 1.0 }
    }
}

impl Iterator for AlphaIter {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let a = match (self.rule, self.k) {
            (_, 0) => 1.0,
            (MomentumRule::FistaExact, _) => 0.5 * (1.0 + Float::sqrt(1.0 + 4.0 * self.prev * self.prev)),
            (MomentumRule::Linear, k) => (k as f64 + 2.0) / 2.0,
            (MomentumRule::Zero, _) => 1.0,
        };
        self.prev = a;
        self.k += 1;
        Some(a)
    }
}

/// β_k = (α_{k−1} − 1)/α_k, with β₀ = 0.
pub fn beta(alpha_prev: Option<f64>, alpha: f64) -> f64 {
    match alpha_prev {
        Some(p) => (p - 1.0) / alpha,
        None => 0.0,
    }
}
