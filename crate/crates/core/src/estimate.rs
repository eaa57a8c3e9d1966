//! Success-probability and advantage estimation, by exact enumeration of all
//! coin sequences or by seeded Monte-Carlo sampling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coins::{for_each_branch, CoinSource, DetRng};
use crate::error::{Error, Result};

/// Default cap on enumerated coin branches.
pub const DEFAULT_MAX_BRANCHES: u64 = 1 << 20;

/// Default oracle budget per role per run.
pub const DEFAULT_BUDGET: usize = 64;

/// Normal quantile for two-sided 95% intervals.
const Z95: f64 = 1.959963984540054;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sample { trials: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub mode: Mode,
    pub seed: u64,
    pub budget: usize,
    pub max_branches: u64,
}

impl GameConfig {
    pub fn exact() -> Self {
        GameConfig { mode: Mode::Exact, seed: 0, budget: DEFAULT_BUDGET, max_branches: DEFAULT_MAX_BRANCHES }
    }

    pub fn sample(trials: u64, seed: u64) -> Self {
        GameConfig { mode: Mode::Sample { trials }, seed, budget: DEFAULT_BUDGET, max_branches: DEFAULT_MAX_BRANCHES }
    }

    pub fn is_exact(&self) -> bool {
        self.mode == Mode::Exact
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityEstimate {
    pub p: f64,
    pub ci_halfwidth: f64,
    /// Samples drawn, or coin branches visited in exact mode.
    pub trials: u64,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdvantageEstimate {
    pub p_real: f64,
    pub p_ideal: f64,
    pub advantage: f64,
    pub ci_halfwidth: f64,
    pub trials: u64,
    pub exact: bool,
}

impl AdvantageEstimate {
    pub fn from_arms(real: &ProbabilityEstimate, ideal: &ProbabilityEstimate) -> Self {
        AdvantageEstimate {
            p_real: real.p,
            p_ideal: ideal.p,
            advantage: (real.p - ideal.p).abs(),
            ci_halfwidth: real.ci_halfwidth + ideal.ci_halfwidth,
            trials: real.trials + ideal.trials,
            exact: real.exact && ideal.exact,
        }
    }

    /// `p_real - p_ideal` without the absolute value.
    pub fn signed(&self) -> f64 {
        self.p_real - self.p_ideal
    }
}

/// Largest distance from `successes / trials` to an endpoint of its 95%
/// Wilson score interval.
pub fn wilson_halfwidth(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 1.0;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half - p).abs()).max((centre + half - p).abs())
}

/// Probability that `event` returns true. Arms of one experiment must use
/// distinct `arm` labels so their sampled coin streams are independent.
pub fn estimate_probability<F>(config: &GameConfig, arm: u32, event: F) -> Result<ProbabilityEstimate>
where
    F: Fn(&mut dyn CoinSource) -> Result<bool> + Sync,
{
    match config.mode {
        Mode::Exact => {
            let mut p = 0.0;
            let branches = for_each_branch(config.max_branches, |c| event(c), |w, hit| {
                if hit {
                    p += w;
                }
            })?;
            Ok(ProbabilityEstimate { p: p.clamp(0.0, 1.0), ci_halfwidth: 0.0, trials: branches, exact: true })
        }
        Mode::Sample { trials } => {
            if trials == 0 {
                return Err(Error::OutOfRange("at least one trial is required".into()));
            }
            let seed = config.seed;
            let hits = (0..trials)
                .into_par_iter()
                .map(|t| event(&mut DetRng::for_trial(seed, arm, t)).map(u64::from))
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            Ok(ProbabilityEstimate {
                p: hits as f64 / trials as f64,
                ci_halfwidth: wilson_halfwidth(hits, trials),
                trials,
                exact: false,
            })
        }
    }
}

/// `|Pr[real] - Pr[ideal]|` with the two arms evaluated independently.
pub fn estimate_advantage<R, I>(config: &GameConfig, real: R, ideal: I) -> Result<AdvantageEstimate>
where
    R: Fn(&mut dyn CoinSource) -> Result<bool> + Sync,
    I: Fn(&mut dyn CoinSource) -> Result<bool> + Sync,
{
    let r = estimate_probability(config, 0, real)?;
    let i = estimate_probability(config, 1, ideal)?;
    Ok(AdvantageEstimate::from_arms(&r, &i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_quarters(c: &mut dyn CoinSource) -> Result<bool> {
        Ok(c.bit() || c.bit())
    }

    #[test]
    fn exact_examples() {
        let cfg = GameConfig::exact();
        let fair = estimate_probability(&cfg, 0, |c| Ok(c.bit())).unwrap();
        assert_eq!((fair.p, fair.ci_halfwidth, fair.exact, fair.trials), (0.5, 0.0, true, 2));
        let sure = estimate_probability(&cfg, 0, |_| Ok(true)).unwrap();
        assert_eq!((sure.p, sure.trials), (1.0, 1));
        assert_eq!(estimate_probability(&cfg, 0, three_quarters).unwrap().p, 0.75);
    }

    #[test]
    fn exact_cap_is_reported() {
        let cfg = GameConfig { max_branches: 8, ..GameConfig::exact() };
        let err = estimate_probability(&cfg, 0, |c| Ok(c.bits(4).is_zero())).unwrap_err();
        assert_eq!(err, Error::EnumerationCap(8));
    }

    #[test]
    fn sampling_is_reproducible() {
        let cfg = GameConfig::sample(500, 7);
        let a = estimate_probability(&cfg, 0, three_quarters).unwrap();
        assert_eq!(a, estimate_probability(&cfg, 0, three_quarters).unwrap());
        assert_ne!(a, estimate_probability(&GameConfig::sample(500, 8), 0, three_quarters).unwrap());
    }

    #[test]
    fn sampled_agrees_with_exact_within_ci() {
        let exact = estimate_probability(&GameConfig::exact(), 0, three_quarters).unwrap().p;
        let covered = (0..100u64)
            .filter(|&rep| {
                let s = estimate_probability(&GameConfig::sample(400, rep), 0, three_quarters).unwrap();
                (s.p - exact).abs() <= s.ci_halfwidth
            })
            .count();
        assert!(covered >= 95, "covered {covered} of 100");
    }

    #[test]
    fn wilson_reference_values() {
        // 50/100: centre 0.5, half-width 1.96 * sqrt(0.25/100 + 1.96^2/40000) / (1 + 1.96^2/100)
        let z: f64 = 1.959963984540054;
        let expect = z * (0.0025f64 + z * z / 40000.0).sqrt() / (1.0 + z * z / 100.0);
        assert!((wilson_halfwidth(50, 100) - expect).abs() < 1e-15);
        // all successes: the interval hugs 1 from below
        let n = 1000.0;
        let lower = n / (n + z * z);
        assert!((wilson_halfwidth(1000, 1000) - (1.0 - lower)).abs() < 1e-12);
    }

    #[test]
    fn advantage_combines_arms() {
        let est = estimate_advantage(&GameConfig::exact(), |_| Ok(true), |c| Ok(c.bit())).unwrap();
        assert_eq!((est.p_real, est.p_ideal, est.advantage, est.ci_halfwidth), (1.0, 0.5, 0.5, 0.0));
        assert!(est.exact);
        let constant = estimate_advantage(&GameConfig::sample(100, 1), |_| Ok(true), |_| Ok(true)).unwrap();
        assert_eq!(constant.advantage, 0.0);
    }
}
