use serde::{Deserialize, Serialize};

/// Normal quantile for two-sided 95% intervals.
pub const Z95: f64 = 1.959_963_984_540_054;

/// A binomial proportion `successes / trials`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64) -> Self {
        debug_assert!(successes <= trials);
        Self { successes, trials }
    }

    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            f64::NAN
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// Half-width of the 95% Wilson score interval. Stays positive at 0 and 1.
    pub fn radius(&self) -> f64 {
        let n = self.trials as f64;
        if n == 0.0 {
            return f64::INFINITY;
        }
        let f = self.fraction();
        let z2 = Z95 * Z95;
        Z95 * (f * (1.0 - f) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
    }

    pub fn merge(self, other: Self) -> Self {
        Self::new(self.successes + other.successes, self.trials + other.trials)
    }
}

/// `b` is not above `a` beyond `scale` times the combined radius.
pub fn not_above(a: Proportion, b: Proportion, scale: f64) -> bool {
    b.fraction() <= a.fraction() + scale * a.radius().hypot(b.radius())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_radius_is_positive_at_the_edges() {
        assert!(Proportion::new(0, 100).radius() > 0.0);
        assert!(Proportion::new(100, 100).radius() > 0.0);
        let r = Proportion::new(50, 100).radius();
        // close to the Wald radius 1.96 * 0.05 for a central fraction
        assert!((r - 0.0962).abs() < 0.002, "{r}");
    }

    #[test]
    fn trend_check() {
        assert!(not_above(Proportion::new(50, 100), Proportion::new(55, 100), 1.0));
        assert!(!not_above(Proportion::new(10, 1000), Proportion::new(500, 1000), 2.0));
    }
}
