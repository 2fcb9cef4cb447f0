use crate::error::{Error, Result};

/// Noise settings shared by the learning rules.
///
/// `epsilon` is the decision noise and `r` scales the probability `ε^r` with
/// which a stationary agent starts an experiment. BLLL ignores `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    epsilon: f64,
    r: f64,
}

impl NoiseParams {
    pub fn new(epsilon: f64, r: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::input(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::input(format!("r must be positive, got {r}")));
        }
        Ok(NoiseParams { epsilon, r })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// ε^r, evaluated in log space.
    pub fn start_probability(&self) -> f64 {
        (self.r * self.epsilon.ln()).exp()
    }

    /// Probability that a log-linear choice between two actions picks the
    /// one worth `chosen` over the one worth `other`:
    /// `ε^-chosen / (ε^-chosen + ε^-other) = 1 / (1 + ε^(chosen - other))`.
    pub fn choice_probability(&self, chosen: usize, other: usize) -> f64 {
        let gap = chosen as f64 - other as f64;
        1.0 / (1.0 + (gap * self.epsilon.ln()).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(NoiseParams::new(0.0, 1.0).is_err());
        assert!(NoiseParams::new(1.0, 1.0).is_err());
        assert!(NoiseParams::new(0.5, 0.0).is_err());
        assert!(NoiseParams::new(0.5, f64::NAN).is_err());
        assert!(NoiseParams::new(0.015, 1.5).is_ok());
    }

    #[test]
    fn choice_probabilities() {
        let p = NoiseParams::new(0.015, 1.5).unwrap();
        assert_eq!(p.choice_probability(4, 4), 0.5);
        // Moving from utility 1 to 0: 1 / (1 + ε^-1) = ε / (1 + ε).
        let down = p.choice_probability(0, 1);
        assert!((down - 0.015 / 1.015).abs() < 1e-15);
        assert!((down - 0.014778).abs() < 1e-6);
        // Keeping an estimate of 3 over 1.
        assert!((p.choice_probability(3, 1) - 1.0 / 1.000225).abs() < 1e-15);
        // Large gaps saturate instead of overflowing.
        assert_eq!(p.choice_probability(0, 5000), 0.0);
        assert_eq!(p.choice_probability(5000, 0), 1.0);
        assert!((p.start_probability() - 0.015f64.powf(1.5)).abs() < 1e-15);
    }
}
