//! Probability traces and closed-form peak predictions.

use serde::Serialize;

/// Closed-form prediction for a search with `N` vertices, `d` oracle values
/// and `M` marked vertices.
///
/// The rotation angle per iteration satisfies `sin(theta) =
/// sqrt(3M/(N(d+1)))`; success probability follows `P_k = (3/(d+1))
/// sin^2(2k theta)`, peaking at `3/(d+1)` after `(pi/4) sqrt(N(d+1)/(3M))`
/// iterations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PredictionRecord {
    pub n: usize,
    pub d: u32,
    pub m: usize,
    /// Half rotation angle per iteration, radians.
    pub theta: f64,
    /// Predicted peak probability, `3/(d+1)`.
    pub p_max: f64,
    /// Predicted peak iteration, `(pi/4) sqrt(N(d+1)/(3M))`.
    pub k_max: f64,
    /// True when the asymptotic regime `M << N`, `d < N` is violated.
    pub regime_warning: bool,
}

impl PredictionRecord {
    /// Builds the prediction, tagging it when outside the asymptotic regime.
    pub fn new(n: usize, d: u32, m: usize) -> Self {
        let nf = n as f64;
        let df = f64::from(d);
        let mf = m as f64;
        let s = (3.0 * mf / (nf * (df + 1.0))).sqrt();
        let regime_warning = mf / nf > crate::tolerances::REGIME_MAX_MARKED_FRACTION
            || f64::from(d) >= nf
            || s > 1.0;
        let theta = s.min(1.0).asin();
        Self {
            n,
            d,
            m,
            theta,
            p_max: 3.0 / (df + 1.0),
            k_max: (std::f64::consts::PI / 4.0) * (nf * (df + 1.0) / (3.0 * mf)).sqrt(),
            regime_warning,
        }
    }

    /// Predicted success probability after `k` iterations.
    pub fn p_at(&self, k: usize) -> f64 {
        self.p_max * (2.0 * k as f64 * self.theta).sin().powi(2)
    }
}

/// A probability trace over iterations (or walk steps) with its detected
/// peak and, when available, the closed-form prediction.
#[derive(Debug, Clone, Serialize)]
pub struct SearchTrace {
    /// `probabilities[k]` is the target probability after `k` iterations.
    pub probabilities: Vec<f64>,
    /// Index of the global maximum; the smallest index on ties.
    pub k_max: usize,
    /// Value at `k_max`.
    pub p_max: f64,
    /// Closed-form prediction, absent for traces with no known closed form.
    pub prediction: Option<PredictionRecord>,
    /// Oracle queries spent per iteration: 1 multi-phase, `d` sign-flip.
    /// Absent for walk traces, which make no oracle queries.
    pub queries_per_iteration: Option<usize>,
}

impl SearchTrace {
    /// Wraps a probability sequence, locating its peak.
    ///
    /// The peak is the global maximum; ties resolve to the smallest index.
    pub fn from_probabilities(
        probabilities: Vec<f64>,
        prediction: Option<PredictionRecord>,
        queries_per_iteration: Option<usize>,
    ) -> Self {
        let (k_max, p_max) = probabilities.iter().enumerate().fold(
            (0usize, f64::NEG_INFINITY),
            |(bi, bv), (i, &v)| {
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            },
        );
        Self {
            probabilities,
            k_max,
            p_max,
            prediction,
            queries_per_iteration,
        }
    }

    /// Number of entries, including the `k = 0` starting point.
    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_detection_prefers_smallest_index_on_ties() {
        let t = SearchTrace::from_probabilities(vec![0.1, 0.5, 0.5, 0.2], None, None);
        assert_eq!(t.k_max, 1);
        assert_eq!(t.p_max, 0.5);
    }

    #[test]
    fn prediction_matches_flagship_numbers() {
        let p = PredictionRecord::new(243, 3, 1);
        assert!((p.p_max - 0.75).abs() < 1e-15);
        assert!((p.k_max - 14.137_166_941_154_069).abs() < 1e-9);
        assert!(!p.regime_warning);

        let p2 = PredictionRecord::new(100, 2, 1);
        assert!((p2.p_max - 1.0).abs() < 1e-15);

        let p5 = PredictionRecord::new(625, 5, 1);
        assert!((p5.p_max - 0.5).abs() < 1e-15);
    }

    #[test]
    fn regime_warning_fires_for_heavy_marking() {
        assert!(PredictionRecord::new(10, 3, 5).regime_warning);
        assert!(PredictionRecord::new(4, 5, 1).regime_warning);
        assert!(!PredictionRecord::new(243, 3, 1).regime_warning);
    }
}
