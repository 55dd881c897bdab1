//! The parameter pack, weight laws, level weights, and the level profile
//! `psi` with its integer-branching companion `psi*`.
//!
//! All weight evaluation goes through base-2 logarithms so that deep levels
//! never overflow. The logarithmic factor in refined weights is
//! `(1 + |log2 t|)^e`, which is positive and equals 1 at `t = 1`; the slow
//! factors come from a closed family so admissibility is checkable.

use crate::error::{Error, Result};
use crate::hardy::WeightedTree;
use crate::tree::RootedTree;
use serde::{Deserialize, Serialize};

/// Slowly varying factors: constant, or a power of an iterated logarithm.
/// Both satisfy `y f'(y)/f(y) -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlowFactor {
    #[default]
    One,
    IterLogPow {
        s: f64,
    },
}

impl SlowFactor {
    /// Evaluate at `y >= 0`.
    pub fn eval(&self, y: f64) -> f64 {
        match self {
            SlowFactor::One => 1.0,
            SlowFactor::IterLogPow { s } => (1.0 + (1.0 + y).ln()).powf(*s),
        }
    }

    /// Numerical log-derivative `y f'(y)/f(y)`.
    pub fn log_derivative(&self, y: f64) -> f64 {
        match self {
            SlowFactor::One => 0.0,
            SlowFactor::IterLogPow { s } => s * y / ((1.0 + y) * (1.0 + (1.0 + y).ln())),
        }
    }
}

/// `F(t) = t^exponent * (1 + |log2 t|)^log_exponent * slow(|log2 t|)` on
/// `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRefinedPower {
    pub exponent: f64,
    pub log_exponent: f64,
    #[serde(default)]
    pub slow: SlowFactor,
}

impl LogRefinedPower {
    pub fn pure(exponent: f64) -> Self {
        Self { exponent, log_exponent: 0.0, slow: SlowFactor::One }
    }

    /// `log2 F(2^{-y})` for `y >= 0`.
    pub fn log2_at_dyadic(&self, y: f64) -> f64 {
        -y * self.exponent + self.log_exponent * (1.0 + y).log2() + self.slow.eval(y).log2()
    }

    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0 && t <= 1.0, "argument must lie in (0, 1]");
        (self.log2_at_dyadic(-t.log2())).exp2()
    }

    /// The purely logarithmic part `(1+y)^log_exponent * slow(y)` at `y`.
    pub fn log_part(&self, y: f64) -> f64 {
        (1.0 + y).powf(self.log_exponent) * self.slow.eval(y)
    }

    /// Checks positivity on a dyadic grid and that the slow factor has a
    /// vanishing log-derivative in the tail.
    pub fn admissible(&self) -> bool {
        let mut prev = f64::INFINITY;
        for k in 0..=64u32 {
            let v = self.log2_at_dyadic(k as f64);
            if !v.is_finite() {
                return false;
            }
            let ld = self.slow.log_derivative((k as f64).max(1.0)).abs();
            if k >= 8 && ld > prev + 1e-12 {
                return false;
            }
            if k >= 8 {
                prev = ld;
            }
        }
        self.slow.log_derivative(1e6).abs() < 1e-2
    }
}

/// The full parameter pack. `h` carries `theta` (its `t`-power) and the
/// lambda refinement; `psi_g`/`psi_v` are purely logarithmic refinements of
/// the weight laws `phi_g(t) = t^{-beta_g} Psi_g(t)` and
/// `phi_v(t) = t^{-beta_v} Psi_v(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentConfig {
    pub d: u32,
    pub r: u32,
    #[serde(
        serialize_with = "serialize_exponent",
        deserialize_with = "deserialize_exponent"
    )]
    pub p: f64,
    pub q: f64,
    pub beta_g: f64,
    pub beta_v: f64,
    pub h: LogRefinedPower,
    pub psi_g: LogRefinedPower,
    pub psi_v: LogRefinedPower,
    #[serde(default = "default_john")]
    pub john_a: f64,
}

fn default_john() -> f64 {
    0.5
}

fn serialize_exponent<S: serde::Serializer>(p: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if p.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*p)
    }
}

fn deserialize_exponent<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(x) => Ok(x),
        Raw::Str(s) if s == "inf" || s == "infinity" => Ok(f64::INFINITY),
        Raw::Str(s) => s.parse::<f64>().map_err(serde::de::Error::custom),
    }
}

/// Outcome of admissibility classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    CaseA,
    CaseB,
    Invalid(String),
}

impl ExponentConfig {
    /// Plain power weights without logarithmic refinement.
    pub fn plain(d: u32, r: u32, p: f64, q: f64, beta_g: f64, beta_v: f64, theta: f64) -> Self {
        Self {
            d,
            r,
            p,
            q,
            beta_g,
            beta_v,
            h: LogRefinedPower::pure(theta),
            psi_g: LogRefinedPower::pure(0.0),
            psi_v: LogRefinedPower::pure(0.0),
            john_a: default_john(),
        }
    }

    pub fn theta(&self) -> f64 {
        self.h.exponent
    }

    pub fn gamma(&self) -> f64 {
        self.h.log_exponent
    }

    pub fn alpha_g(&self) -> f64 {
        -self.psi_g.log_exponent
    }

    pub fn alpha_v(&self) -> f64 {
        -self.psi_v.log_exponent
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_g() + self.alpha_v()
    }

    pub fn beta(&self) -> f64 {
        self.beta_g + self.beta_v
    }

    pub fn delta(&self) -> f64 {
        let dp = if self.p.is_infinite() { 0.0 } else { self.d as f64 / self.p };
        self.r as f64 + self.d as f64 / self.q - dp
    }

    pub fn p_prime(&self) -> f64 {
        conjugate(self.p)
    }

    /// `(1/q - 1/p)_+`.
    pub fn qp_gap(&self) -> f64 {
        let ip = if self.p.is_infinite() { 0.0 } else { 1.0 / self.p };
        (1.0 / self.q - ip).max(0.0)
    }

    /// Product refinement `Psi = Psi_g * Psi_v` evaluated at `t`.
    pub fn psi_product(&self, t: f64) -> f64 {
        self.psi_g.eval(t) * self.psi_v.eval(t)
    }

    /// Product slow part `rho(y) = rho_g(y) rho_v(y)` together with the
    /// log-power `y^{-alpha}` convention `(1+y)^{-alpha} rho(y)`.
    pub fn refinement_at(&self, y: f64) -> f64 {
        self.psi_g.log_part(y) * self.psi_v.log_part(y)
    }

    /// The weight law `phi_g(t) = t^{-beta_g} Psi_g(t)` at a distance
    /// `t in (0, 1]`.
    pub fn phi_g_at(&self, t: f64) -> f64 {
        let y = (-t.log2()).max(0.0);
        t.powf(-self.beta_g) * self.psi_g.log_part(y)
    }

    pub fn phi_v_at(&self, t: f64) -> f64 {
        let y = (-t.log2()).max(0.0);
        t.powf(-self.beta_v) * self.psi_v.log_part(y)
    }

    /// Classify the pack per the admissibility conditions; the first
    /// violated condition wins.
    pub fn validate(&self) -> Classification {
        if !(1..=3).contains(&self.d) {
            return Classification::Invalid(format!("d = {} outside 1..=3", self.d));
        }
        if self.r < 1 {
            return Classification::Invalid("r must be >= 1".into());
        }
        if !(self.p > 1.0) {
            return Classification::Invalid(format!("p = {} must lie in (1, inf]", self.p));
        }
        if !(1.0..f64::INFINITY).contains(&self.q) {
            return Classification::Invalid(format!("q = {} must lie in [1, inf)", self.q));
        }
        let theta = self.theta();
        if !(0.0..self.d as f64).contains(&theta) {
            return Classification::Invalid(format!("theta = {theta} outside [0, d)"));
        }
        let delta = self.delta();
        if delta <= 0.0 {
            return Classification::Invalid(format!("delta = {delta} must be positive"));
        }
        if self.psi_g.exponent != 0.0 || self.psi_v.exponent != 0.0 {
            return Classification::Invalid("Psi_g / Psi_v must carry no t-power".into());
        }
        let muck = -self.beta_v * self.q + self.d as f64 - theta;
        if muck <= 0.0 {
            return Classification::Invalid(format!(
                "-beta_v q + d - theta = {muck} must be positive"
            ));
        }
        let threshold = delta - theta * self.qp_gap();
        let beta = self.beta();
        if beta < threshold - 1e-12 {
            Classification::CaseA
        } else if (beta - threshold).abs() <= 1e-12 {
            let gamma = self.gamma();
            if gamma >= 0.0 {
                return Classification::Invalid(format!(
                    "borderline beta requires gamma < 0, got {gamma}"
                ));
            }
            let alpha = self.alpha();
            let need = (1.0 - gamma) * self.qp_gap();
            if alpha <= need {
                return Classification::Invalid(format!(
                    "borderline beta requires alpha > (1-gamma)(1/q-1/p)_+ = {need}, got {alpha}"
                ));
            }
            Classification::CaseB
        } else {
            Classification::Invalid(format!(
                "beta = {beta} exceeds the admissible threshold {threshold}"
            ))
        }
    }
}

pub fn conjugate(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// Level weights of the quotient-tree inequality:
/// `u_j = 2^{mj(beta_g - d/p')} Psi_g(2^{-mj})`,
/// `w_j = 2^{mj(beta_v - d/q)}  Psi_v(2^{-mj})`.
pub fn level_weights(cfg: &ExponentConfig, m: u32, j: u32) -> (f64, f64) {
    let y = (m * j) as f64;
    let d = cfg.d as f64;
    let log2_u = y * (cfg.beta_g - d / cfg.p_prime()) + cfg.psi_g.log2_at_dyadic(y);
    let log2_w = y * (cfg.beta_v - d / cfg.q) + cfg.psi_v.log2_at_dyadic(y);
    (log2_u.exp2(), log2_w.exp2())
}

/// The level profile `psi(j) = m theta j - log2 Lambda(2^{-mj})`.
pub fn psi(cfg: &ExponentConfig, m: u32, j: u32) -> f64 {
    let y = (m * j) as f64;
    m as f64 * cfg.theta() * j as f64 - cfg.h.log_part(y).log2()
}

/// `psi*` in branching form: `psi*(0) = 0` and
/// `2^{psi*(j) - psi*(j-1)} = floor(2^{psi(j) - psi*(j-1)})`, stored as the
/// integer branching factors whose cumulative products are `2^{psi*(j)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiStar {
    /// `branching[i] = 2^{psi*(i+1) - psi*(i)}`.
    pub branching: Vec<u64>,
}

impl PsiStar {
    pub fn from_profile(psi_vals: &[f64]) -> Result<Self> {
        let mut branching = Vec::with_capacity(psi_vals.len().saturating_sub(1));
        let mut star = 0.0f64; // psi*(j-1)
        for (j, &pj) in psi_vals.iter().enumerate().skip(1) {
            // Nudge against powf rounding so exact integer profiles floor
            // cleanly.
            let x = (pj - star).exp2();
            let n = (x * (1.0 + 1e-12) + 1e-9).floor();
            if n < 1.0 {
                return Err(Error::PsiStarUnderflow { j: j as u32 });
            }
            branching.push(n as u64);
            star += n.log2();
        }
        Ok(Self { branching })
    }

    pub fn from_config(cfg: &ExponentConfig, m: u32, depth: u32) -> Result<Self> {
        let vals: Vec<f64> = (0..=depth).map(|j| psi(cfg, m, j)).collect();
        Self::from_profile(&vals)
    }

    pub fn depth(&self) -> usize {
        self.branching.len()
    }

    /// `psi*(j)` as a real number (log2 of an integer).
    pub fn value(&self, j: usize) -> f64 {
        self.branching[..j].iter().map(|&n| (n as f64).log2()).sum()
    }

    /// `2^{psi*(hi) - psi*(lo)}` exactly.
    pub fn pow2_between(&self, lo: usize, hi: usize) -> Result<u128> {
        let mut prod: u128 = 1;
        for &n in &self.branching[lo..hi] {
            prod = prod
                .checked_mul(n as u128)
                .ok_or(Error::RegularTreeCap(u128::MAX, u128::MAX))?;
        }
        Ok(prod)
    }
}

/// Which estimate of the geometric-sum lemma to measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumBoundKind {
    /// `sum 2^{sigma k_j} Phi(2^{-k_j})` against the first (`sigma < 0`) or
    /// last (`sigma > 0`) term.
    DyadicPower { sigma: f64 },
    /// `sum k_j^mu rho(k_j)` against `k_0^{1+mu} rho(k_0)`, `mu < -1`.
    PowerLog { mu: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SumBoundsReport {
    pub sum: f64,
    pub bound_term: f64,
    /// `sum / bound_term`; the lemma asserts this is bounded by a constant
    /// depending only on the exponent and the slow factor.
    pub measured_constant: f64,
}

pub fn sum_bounds_check(
    form: &LogRefinedPower,
    kind: SumBoundKind,
    ks: &[u32],
) -> Result<SumBoundsReport> {
    if ks.is_empty() || !ks.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter("index list must be strictly increasing".into()));
    }
    let (sum, bound_term) = match kind {
        SumBoundKind::DyadicPower { sigma } => {
            if sigma == 0.0 {
                return Err(Error::InvalidParameter("sigma must be nonzero".into()));
            }
            let term = |k: u32| (sigma * k as f64 + form.log2_at_dyadic(k as f64)).exp2();
            let sum: f64 = ks.iter().map(|&k| term(k)).sum();
            let anchor = if sigma < 0.0 { ks[0] } else { *ks.last().unwrap() };
            (sum, term(anchor))
        }
        SumBoundKind::PowerLog { mu } => {
            if mu >= -1.0 {
                return Err(Error::InvalidParameter("mu must be below -1".into()));
            }
            if ks[0] == 0 {
                return Err(Error::InvalidParameter("indices must be positive".into()));
            }
            let term = |k: u32| (k as f64).powf(mu) * form.log_part(k as f64);
            let sum: f64 = ks.iter().map(|&k| term(k)).sum();
            let k0 = ks[0] as f64;
            (sum, k0.powf(1.0 + mu) * form.log_part(k0))
        }
    };
    Ok(SumBoundsReport { sum, bound_term, measured_constant: sum / bound_term })
}

/// Weights constant on each level, indexed by absolute level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelWeights {
    pub u: Vec<f64>,
    pub w: Vec<f64>,
}

impl LevelWeights {
    pub fn from_config(cfg: &ExponentConfig, m: u32, max_level: u32) -> Self {
        let pairs: Vec<(f64, f64)> = (0..=max_level).map(|j| level_weights(cfg, m, j)).collect();
        Self { u: pairs.iter().map(|p| p.0).collect(), w: pairs.iter().map(|p| p.1).collect() }
    }

    /// Pure exponentials `u_j = 2^{a j}`, `w_j = 2^{b j}`; handy for
    /// synthetic regularity experiments.
    pub fn exponential(a: f64, b: f64, max_level: u32) -> Self {
        Self {
            u: (0..=max_level).map(|j| (a * j as f64).exp2()).collect(),
            w: (0..=max_level).map(|j| (b * j as f64).exp2()).collect(),
        }
    }

    pub fn max_level(&self) -> u32 {
        self.u.len() as u32 - 1
    }

    /// Instantiate on a tree whose root sits at absolute level `offset`.
    pub fn apply(&self, tree: &RootedTree, offset: u32) -> WeightedTree {
        let u = tree
            .vertices()
            .map(|v| self.u[offset as usize + tree.depth(v)])
            .collect();
        let w = tree
            .vertices()
            .map(|v| self.w[offset as usize + tree.depth(v)])
            .collect();
        WeightedTree::new(tree.clone(), u, w).expect("level weights are positive")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn base_cfg() -> ExponentConfig {
        ExponentConfig::plain(2, 2, 2.0, 2.0, 0.0, 0.0, 1.0)
    }

    #[test]
    fn classify_case_a() {
        // delta = 2, beta = 0 < 2.
        assert_eq!(base_cfg().validate(), Classification::CaseA);
    }

    #[test]
    fn borderline_without_log_refinement_is_invalid() {
        // beta = delta = 2 forces gamma < 0, but Lambda == 1 has gamma = 0.
        let cfg = ExponentConfig::plain(2, 2, 2.0, 2.0, 2.0, 0.0, 1.0);
        assert!(matches!(cfg.validate(), Classification::Invalid(_)));
    }

    #[test]
    fn muckenhoupt_violation_detected() {
        // d=1, r=1, p=2, q=4, beta_v = 0.3: delta = 0.75 > 0 but
        // -0.3*4 + 1 - 0 = -0.2 < 0.
        let cfg = ExponentConfig::plain(1, 1, 2.0, 4.0, 0.0, 0.3, 0.0);
        assert_relative_eq!(cfg.delta(), 0.75);
        match cfg.validate() {
            Classification::Invalid(msg) => assert!(msg.contains("beta_v")),
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn case_b_with_log_refinement() {
        let mut cfg = ExponentConfig::plain(2, 2, 2.0, 2.0, 2.0, 0.0, 1.0);
        cfg.h.log_exponent = -0.5;
        cfg.psi_g.log_exponent = -0.4; // alpha_g = 0.4 > 0 = (1-gamma)*0
        assert_eq!(cfg.validate(), Classification::CaseB);
    }

    #[test]
    fn level_weights_examples() {
        let cfg = base_cfg();
        let (u0, w0) = level_weights(&cfg, 3, 0);
        assert_relative_eq!(u0, 1.0);
        assert_relative_eq!(w0, 1.0);
        // d=2, p=q=2, beta=0, m=1, j=3: u_3 = w_3 = 2^{-3}.
        let (u3, w3) = level_weights(&cfg, 1, 3);
        assert_relative_eq!(u3, 0.125, max_relative = 1e-12);
        assert_relative_eq!(w3, 0.125, max_relative = 1e-12);
        // d=1, p=inf (p'=1), beta_g=0.5, m=2, j=1: u_1 = 2^{2(0.5-1)} = 1/2.
        let cfg = ExponentConfig::plain(1, 1, f64::INFINITY, 2.0, 0.5, 0.0, 0.0);
        let (u1, _) = level_weights(&cfg, 2, 1);
        assert_relative_eq!(u1, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn psi_star_integer_profile() {
        // psi(j) = j gives branching 2 everywhere and psi*(j) = j.
        let vals: Vec<f64> = (0..=8).map(|j| j as f64).collect();
        let ps = PsiStar::from_profile(&vals).unwrap();
        assert!(ps.branching.iter().all(|&n| n == 2));
        for j in 0..=8 {
            assert_relative_eq!(ps.value(j), j as f64);
        }
    }

    #[test]
    fn psi_star_fractional_profile() {
        // psi(j) = 1.5 j: floors of 2^{1.5}, 2^{2}, 2^{1.5}, 2^{2} ... give
        // psi* = 0, 1, 3, 4, 6, ...
        let vals: Vec<f64> = (0..=4).map(|j| 1.5 * j as f64).collect();
        let ps = PsiStar::from_profile(&vals).unwrap();
        assert_eq!(ps.branching, vec![2, 4, 2, 4]);
        let expect = [0.0, 1.0, 3.0, 4.0, 6.0];
        for (j, e) in expect.iter().enumerate() {
            assert_relative_eq!(ps.value(j), *e);
        }
    }

    #[test]
    fn psi_star_bracket_holds() {
        for &(theta, gamma) in &[(0.5, 0.0), (1.0, -0.5), (0.6309297535714574, 0.0)] {
            let mut cfg = ExponentConfig::plain(2, 2, 2.0, 2.0, 0.0, 0.0, theta);
            cfg.h.log_exponent = gamma;
            let m = 2;
            let depth = 40;
            let ps = match PsiStar::from_config(&cfg, m, depth) {
                Ok(ps) => ps,
                Err(_) => continue,
            };
            for j in 0..=depth as usize {
                let pj = psi(&cfg, m, j as u32);
                let star = ps.value(j);
                assert!(star <= pj + 1e-9, "2^psi* <= 2^psi failed at {j}");
                assert!(pj <= star + 1.0 + 1e-9, "2^psi <= 2*2^psi* failed at {j}");
            }
        }
    }

    #[test]
    fn psi_star_underflow_detected() {
        // A decreasing profile cannot produce integer branching.
        let vals = vec![0.0, -2.0];
        assert!(matches!(
            PsiStar::from_profile(&vals),
            Err(Error::PsiStarUnderflow { .. })
        ));
    }

    #[test]
    fn geometric_sum_bounds() {
        let one = LogRefinedPower::pure(0.0);
        let ks: Vec<u32> = (0..=20).collect();
        let r = sum_bounds_check(&one, SumBoundKind::DyadicPower { sigma: -1.0 }, &ks).unwrap();
        assert!(r.measured_constant <= 2.0 + 1e-12);
        let r = sum_bounds_check(&one, SumBoundKind::DyadicPower { sigma: 1.0 }, &ks).unwrap();
        assert!(r.measured_constant <= 2.0 + 1e-12);
        let ks: Vec<u32> = (1..=51).collect();
        let r = sum_bounds_check(&one, SumBoundKind::PowerLog { mu: -2.0 }, &ks).unwrap();
        assert!(r.measured_constant <= 2.0);
    }

    #[test]
    fn slow_factor_power_bounds() {
        // Phi(t)/t^{-eps} -> 0 and Phi(t)/t^{eps} -> infinity monotonically
        // in the dyadic tail.
        for s in [0.5, 2.0, -1.5] {
            let phi = LogRefinedPower {
                exponent: 0.0,
                log_exponent: 1.0,
                slow: SlowFactor::IterLogPow { s },
            };
            for eps in [0.1, 0.5] {
                let down = |k: u32| phi.log2_at_dyadic(k as f64) - eps * k as f64;
                let up = |k: u32| phi.log2_at_dyadic(k as f64) + eps * k as f64;
                // Locate the tail onset, then require monotonicity through
                // the rest of the grid.
                let onset = (8..200u32)
                    .find(|&k| down(k + 1) < down(k) && up(k + 1) > up(k))
                    .expect("tail exists");
                assert!(onset <= 64, "tail onset {onset} too late, s={s} eps={eps}");
                for k in onset..200 {
                    assert!(down(k + 1) < down(k), "s={s} eps={eps} k={k}");
                    assert!(up(k + 1) > up(k), "s={s} eps={eps} k={k}");
                }
            }
        }
    }

    #[test]
    fn evaluations_positive_finite() {
        let mut cfg = base_cfg();
        cfg.psi_g = LogRefinedPower {
            exponent: 0.0,
            log_exponent: -0.7,
            slow: SlowFactor::IterLogPow { s: 1.2 },
        };
        for j in 0..=64u32 {
            let (u, w) = level_weights(&cfg, 1, j);
            assert!(u > 0.0 && u.is_finite());
            assert!(w > 0.0 && w.is_finite());
            let t = (-(j as f64)).exp2();
            let v = cfg.psi_g.eval(t);
            assert!(v > 0.0 && v.is_finite());
        }
    }

    #[test]
    fn exponent_serde_roundtrip() {
        let mut cfg = base_cfg();
        cfg.p = f64::INFINITY;
        let s = serde_json::to_string(&cfg).unwrap();
        let back: ExponentConfig = serde_json::from_str(&s).unwrap();
        assert!(back.p.is_infinite());
    }
}
