//! The discrete Hardy-type operator on a weighted tree, operator-norm
//! oracles for general `(p, q)`, and the two-weight sequence inequality.
//!
//! The operator sends `f` to `w(v) * sum over the segment [base, v] of u f`.
//! Its `l_p -> l_q` norm is exact in the boundary cases (`p` or `q` in
//! `{1, inf}`) and computed by multi-start projected gradient ascent over the
//! nonnegative cone otherwise; `p = q = 2` is cross-checked by power
//! iteration on the Gram matrix.

use crate::error::{Error, Result};
use crate::par::par_map;
use crate::tree::RootedTree;
use crate::weights::conjugate;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Default cap on the subtree size for materializing the prefix matrix.
pub const ORACLE_SIZE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree {
    pub tree: RootedTree,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
}

impl WeightedTree {
    pub fn new(tree: RootedTree, u: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        assert_eq!(u.len(), tree.len());
        assert_eq!(w.len(), tree.len());
        for v in tree.vertices() {
            if !(u[v] > 0.0 && u[v].is_finite() && w[v] > 0.0 && w[v].is_finite()) {
                return Err(Error::NonPositiveWeight(v));
            }
        }
        Ok(Self { tree, u, w })
    }

    pub fn unit(tree: RootedTree) -> Self {
        let n = tree.len();
        Self { tree, u: vec![1.0; n], w: vec![1.0; n] }
    }

    /// Sum of `w^q` over the subtree above each vertex (inclusive).
    pub fn subtree_w_pow_sums(&self, q: f64) -> Vec<f64> {
        let mut sums = vec![0.0; self.tree.len()];
        let order = self.tree.subtree(self.tree.root());
        for &v in order.iter().rev() {
            let mut s = self.w[v].powf(q);
            for &c in self.tree.children(v) {
                s += sums[c];
            }
            sums[v] = s;
        }
        sums
    }
}

/// One prefix accumulation per vertex of the subtree above `base`; vertices
/// outside the subtree get zero.
pub fn apply_hardy(wt: &WeightedTree, base: usize, f: &[f64]) -> Vec<f64> {
    assert_eq!(f.len(), wt.tree.len());
    let mut out = vec![0.0; wt.tree.len()];
    // DFS with a running prefix of sum u*f along the segment from base.
    let mut stack = vec![(base, 0.0f64)];
    while let Some((v, acc)) = stack.pop() {
        let acc = acc + wt.u[v] * f[v];
        out[v] = wt.w[v] * acc;
        for &c in wt.tree.children(v) {
            stack.push((c, acc));
        }
    }
    out
}

/// The prefix ("ancestor incidence") matrix of the subtree above `base`:
/// `M[i][j] = w(v_i) u(v_j)` when `v_j` lies on `[base, v_i]`. Rows and
/// columns use DFS preorder, returned alongside.
pub fn prefix_matrix(wt: &WeightedTree, base: usize) -> (DMatrix<f64>, Vec<usize>) {
    let order = wt.tree.subtree(base);
    let n = order.len();
    let mut pos = vec![usize::MAX; wt.tree.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut m = DMatrix::zeros(n, n);
    for (i, &v) in order.iter().enumerate() {
        let mut a = v;
        loop {
            m[(i, pos[a])] = wt.w[v] * wt.u[a];
            if a == base {
                break;
            }
            a = wt.tree.parent(a).expect("subtree vertices reach the base");
        }
    }
    (m, order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    ExactBoundary,
    OracleOptimize,
    SubtreeSup,
}

/// An operator-norm estimate with an optional witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub method: NormMethod,
    /// Witness `f` as `(vertex, value)` pairs, normalized to unit `l_p` norm.
    pub certificate: Option<Vec<(usize, f64)>>,
    /// Relative disagreement across converged restarts; values above 1e-6
    /// flag that the interior-point ascent found distinct local maxima and
    /// the result is a certified lower bound only.
    pub restart_spread: f64,
}

impl NormEstimate {
    fn exact(value: f64, cert: Vec<(usize, f64)>) -> Self {
        Self {
            value,
            method: NormMethod::ExactBoundary,
            certificate: Some(cert),
            restart_spread: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub size_cap: usize,
    pub restarts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { size_cap: ORACLE_SIZE_CAP, restarts: 32, tol: 1e-10, max_iter: 4000, seed: 0 }
    }
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    } else {
        x.iter().map(|&v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `l_p -> l_q` norm of the Hardy operator on the subtree above `base`.
pub fn norm_oracle(wt: &WeightedTree, base: usize, p: f64, q: f64) -> Result<NormEstimate> {
    norm_oracle_with(wt, base, p, q, OracleOptions::default())
}

pub fn norm_oracle_with(
    wt: &WeightedTree,
    base: usize,
    p: f64,
    q: f64,
    opts: OracleOptions,
) -> Result<NormEstimate> {
    if !(1.0..=f64::INFINITY).contains(&p) || !(1.0..=f64::INFINITY).contains(&q) {
        return Err(Error::InvalidParameter(format!("p = {p}, q = {q} must lie in [1, inf]")));
    }
    let size = wt.tree.subtree(base).len();
    if size > opts.size_cap {
        return Err(Error::TreeTooLarge { size, cap: opts.size_cap });
    }
    let (m, order) = prefix_matrix(wt, base);
    let n = order.len();
    let cert = |f: &[f64]| -> Vec<(usize, f64)> {
        order.iter().copied().zip(f.iter().copied()).collect()
    };

    if n == 1 {
        return Ok(NormEstimate::exact(m[(0, 0)], cert(&[1.0])));
    }
    if p == 1.0 {
        // Extreme points of the l_1 ball are signed basis vectors; for a
        // nonnegative matrix the best is the column with the largest q-norm.
        let (best, val) = (0..n)
            .map(|j| (j, lp_norm(m.column(j).as_slice(), q)))
            .fold((0, f64::NEG_INFINITY), |acc, it| if it.1 > acc.1 { it } else { acc });
        let mut f = vec![0.0; n];
        f[best] = 1.0;
        return Ok(NormEstimate::exact(val, cert(&f)));
    }
    if q.is_infinite() {
        // sup over rows of the dual norm of the row.
        let pp = conjugate(p);
        let mut best_row = 0;
        let mut val = f64::NEG_INFINITY;
        for i in 0..n {
            let row: Vec<f64> = (0..n).map(|j| m[(i, j)]).collect();
            let nr = lp_norm(&row, pp);
            if nr > val {
                val = nr;
                best_row = i;
            }
        }
        let row: Vec<f64> = (0..n).map(|j| m[(best_row, j)]).collect();
        let f = holder_extremal(&row, p);
        return Ok(NormEstimate::exact(val, cert(&f)));
    }
    if p.is_infinite() {
        // Monotone in f, so f = 1 is optimal on the unit ball.
        let ones = vec![1.0; n];
        let val = lp_norm((&m * DMatrix::from_column_slice(n, 1, &ones)).as_slice(), q);
        return Ok(NormEstimate::exact(val, cert(&ones)));
    }
    if q == 1.0 {
        // ||Mf||_1 = <M^T 1, f> maximized by the Hoelder extremal of M^T 1.
        let col_sums: Vec<f64> = (0..n).map(|j| m.column(j).sum()).collect();
        let val = lp_norm(&col_sums, conjugate(p));
        let f = holder_extremal(&col_sums, p);
        return Ok(NormEstimate::exact(val, cert(&f)));
    }

    // Interior case: multi-start projected gradient ascent on the l_p sphere
    // intersected with the nonnegative cone.
    let starts = build_starts(n, opts.restarts, opts.seed);
    let results: Vec<(f64, Vec<f64>)> =
        par_map(&starts, |s| ascend(&m, s.clone(), p, q, opts.tol, opts.max_iter));
    let mut best_val = f64::NEG_INFINITY;
    let mut best_f: Vec<f64> = Vec::new();
    let mut min_val = f64::INFINITY;
    for (v, f) in &results {
        if *v > best_val {
            best_val = *v;
            best_f = f.clone();
        }
        min_val = min_val.min(*v);
    }
    let mut spread = (best_val - min_val) / best_val.max(f64::MIN_POSITIVE);

    if (p - 2.0).abs() < 1e-14 && (q - 2.0).abs() < 1e-14 {
        // Independent route: power iteration on the Gram matrix.
        let pi = gram_power_iteration(&m, opts.max_iter, opts.tol);
        spread = spread.max((pi - best_val).abs() / pi.max(best_val).max(f64::MIN_POSITIVE));
        if pi > best_val {
            best_val = pi;
        }
    }

    Ok(NormEstimate {
        value: best_val,
        method: NormMethod::OracleOptimize,
        certificate: Some(cert(&best_f)),
        restart_spread: spread,
    })
}

/// `f` with `<c, f> = ||c||_{p'}` and `||f||_p = 1` for nonnegative `c`.
fn holder_extremal(c: &[f64], p: f64) -> Vec<f64> {
    if p.is_infinite() {
        return vec![1.0; c.len()];
    }
    let pp = conjugate(p);
    let mut f: Vec<f64> = if pp.is_infinite() {
        // p = 1: spike at the maximum.
        let arg = c
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut f = vec![0.0; c.len()];
        f[arg] = 1.0;
        f
    } else {
        c.iter().map(|&v| v.max(0.0).powf(pp - 1.0)).collect()
    };
    let nrm = lp_norm(&f, p);
    if nrm > 0.0 {
        for v in &mut f {
            *v /= nrm;
        }
    }
    f
}

fn build_starts(n: usize, restarts: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![vec![1.0; n]];
    for i in 0..n.min(8) {
        let mut e = vec![1e-6; n];
        e[i] = 1.0;
        starts.push(e);
    }
    while starts.len() < restarts.max(2) {
        starts.push((0..n).map(|_| rng.random::<f64>() + 1e-9).collect());
    }
    starts
}

fn ascend(m: &DMatrix<f64>, mut f: Vec<f64>, p: f64, q: f64, tol: f64, max_iter: usize) -> (f64, Vec<f64>) {
    let n = f.len();
    normalize_p(&mut f, p);
    let value = |f: &[f64]| -> f64 {
        let g = m * DMatrix::from_column_slice(n, 1, f);
        lp_norm(g.as_slice(), q)
    };
    let mut val = value(&f);
    let mut step = 0.5;
    for _ in 0..max_iter {
        let g = m * DMatrix::from_column_slice(n, 1, &f);
        let gn = lp_norm(g.as_slice(), q);
        if gn <= 0.0 {
            break;
        }
        // gradient of ||Mf||_q at f (all entries nonnegative).
        let gq: Vec<f64> = g.as_slice().iter().map(|&x| x.max(0.0).powf(q - 1.0)).collect();
        let grad = m.transpose() * DMatrix::from_column_slice(n, 1, &gq);
        let scale = gn.powf(1.0 - q);
        let mut improved = false;
        for _ in 0..40 {
            let mut cand: Vec<f64> = f
                .iter()
                .zip(grad.as_slice())
                .map(|(&fi, &gi)| (fi + step * scale * gi).max(0.0))
                .collect();
            normalize_p(&mut cand, p);
            let cv = value(&cand);
            if cv > val * (1.0 + 1e-16) {
                f = cand;
                let gain = cv - val;
                val = cv;
                step *= 1.25;
                improved = true;
                if gain < tol * val {
                    return (val, f);
                }
                break;
            }
            step *= 0.5;
            if step < 1e-16 {
                return (val, f);
            }
        }
        if !improved {
            break;
        }
    }
    (val, f)
}

fn normalize_p(f: &mut [f64], p: f64) {
    let nrm = lp_norm(f, p);
    if nrm > 0.0 {
        for v in f.iter_mut() {
            *v /= nrm;
        }
    }
}

fn gram_power_iteration(m: &DMatrix<f64>, max_iter: usize, tol: f64) -> f64 {
    let n = m.ncols();
    let gram = m.transpose() * m;
    let mut v = DMatrix::from_element(n, 1, 1.0 / (n as f64).sqrt());
    let mut lambda = 0.0f64;
    for _ in 0..max_iter {
        let w = &gram * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = w / nw;
        let nl = (next.transpose() * &gram * &next)[(0, 0)];
        if (nl - lambda).abs() <= tol * nl.max(1.0) {
            return nl.sqrt();
        }
        lambda = nl;
        v = next;
    }
    lambda.sqrt()
}

/// The two-weight sequence constant
/// `C = sup_m (sum_{n>=m} w_n^q)^{1/q} (sum_{n<=m} u_n^{p'})^{1/p'}`
/// together with a randomized check of the inequality it governs.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceHardyReport {
    pub constant: f64,
    pub argmax_index: usize,
    /// Largest `LHS / ||a||_p` seen over random test sequences.
    pub max_observed_ratio: f64,
    /// Ratio achieved by the Hoelder probing sequence; at least `C`.
    pub probe_ratio: f64,
}

pub fn andersen_heinig(
    u: &[f64],
    w: &[f64],
    p: f64,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<SequenceHardyReport> {
    if u.len() != w.len() || u.is_empty() {
        return Err(Error::InvalidParameter("sequences must share a positive length".into()));
    }
    if !(1.0 <= p && p <= q && q < f64::INFINITY) {
        return Err(Error::InvalidParameter(format!("need 1 <= p <= q < inf, got ({p}, {q})")));
    }
    if u.iter().chain(w).any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidParameter("sequences must be nonnegative".into()));
    }
    let n = u.len();
    let pp = conjugate(p);
    let tail_w: Vec<f64> = {
        let mut acc = 0.0;
        let mut t = vec![0.0; n];
        for i in (0..n).rev() {
            acc += w[i].powf(q);
            t[i] = acc;
        }
        t
    };
    let mut head_u = vec![0.0; n];
    let mut acc = 0.0f64;
    for i in 0..n {
        if pp.is_infinite() {
            acc = acc.max(u[i]);
        } else {
            acc += u[i].powf(pp);
        }
        head_u[i] = acc;
    }
    let mut constant = 0.0;
    let mut argmax = 0;
    for i in 0..n {
        let hu = if pp.is_infinite() { head_u[i] } else { head_u[i].powf(1.0 / pp) };
        let c = tail_w[i].powf(1.0 / q) * hu;
        if c > constant {
            constant = c;
            argmax = i;
        }
    }

    let lhs = |a: &[f64]| -> f64 {
        let mut acc = 0.0;
        let mut out = 0.0;
        for i in 0..n {
            acc += u[i] * a[i];
            out += (w[i] * acc.abs()).powf(q);
        }
        out.powf(1.0 / q)
    };

    // Probing sequence: the Hoelder extremal of u restricted to the head at
    // the argmax, which realizes the constant.
    let mut probe = vec![0.0; n];
    if p == 1.0 {
        let best = (0..=argmax)
            .max_by(|&a, &b| u[a].total_cmp(&u[b]))
            .unwrap_or(0);
        probe[best] = 1.0;
    } else {
        for i in 0..=argmax {
            probe[i] = u[i].powf(pp / p);
        }
    }
    let probe_norm = lp_norm(&probe, p);
    let probe_ratio = if probe_norm > 0.0 { lhs(&probe) / probe_norm } else { 0.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio = probe_ratio;
    for _ in 0..trials {
        let a: Vec<f64> = (0..n)
            .map(|_| {
                let mag: f64 = rng.random::<f64>();
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign * mag.powi(2)
            })
            .collect();
        let an = lp_norm(&a, p);
        if an > 0.0 {
            max_ratio = max_ratio.max(lhs(&a) / an);
        }
    }
    Ok(SequenceHardyReport { constant, argmax_index: argmax, max_observed_ratio: max_ratio, probe_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn path_unit(n: usize) -> WeightedTree {
        WeightedTree::unit(RootedTree::path(n))
    }

    #[test]
    fn apply_hardy_prefix_sums() {
        let wt = path_unit(2);
        let out = apply_hardy(&wt, 0, &[1.0, 1.0]);
        assert_eq!(out, vec![1.0, 2.0]);
        let zero = apply_hardy(&wt, 0, &[0.0, 0.0]);
        assert_eq!(zero, vec![0.0, 0.0]);
        let star = WeightedTree::unit(RootedTree::star(2));
        let out = apply_hardy(&star, 0, &[1.0, 2.0, 3.0]);
        assert_eq!(out, vec![1.0, 3.0, 4.0]);
    }

    #[test]
    fn oracle_single_vertex() {
        let wt = WeightedTree::unit(RootedTree::singleton());
        for (p, q) in [(1.0, 1.0), (2.0, 2.0), (f64::INFINITY, 3.0), (1.5, f64::INFINITY)] {
            let est = norm_oracle(&wt, 0, p, q).unwrap();
            assert_relative_eq!(est.value, 1.0);
        }
    }

    #[test]
    fn oracle_path2_golden_ratio() {
        // Singular value of [[1,0],[1,1]] is the golden ratio.
        let wt = path_unit(2);
        let est = norm_oracle(&wt, 0, 2.0, 2.0).unwrap();
        assert_relative_eq!(est.value, (1.0 + 5.0f64.sqrt()) / 2.0, max_relative = 1e-9);
        assert!(est.restart_spread < 1e-6);
    }

    #[test]
    fn oracle_path2_l1() {
        let wt = path_unit(2);
        let est = norm_oracle(&wt, 0, 1.0, 1.0).unwrap();
        assert_relative_eq!(est.value, 2.0);
        // Exhaustive basis cross-check.
        for (j, expect) in [(0usize, 2.0f64), (1, 1.0)] {
            let mut f = vec![0.0, 0.0];
            f[j] = 1.0;
            let out = apply_hardy(&wt, 0, &f);
            assert_relative_eq!(lp_norm(&out, 1.0), expect);
        }
    }

    #[test]
    fn certificate_reproduces_value() {
        let tree = RootedTree::build(&[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)], 0).unwrap();
        let u: Vec<f64> = (0..6).map(|i| 1.0 + 0.3 * i as f64).collect();
        let w: Vec<f64> = (0..6).map(|i| 2.0 - 0.2 * i as f64).collect();
        let wt = WeightedTree::new(tree, u, w).unwrap();
        for (p, q) in [(1.5, 2.5), (2.0, 2.0), (3.0, 1.5)] {
            let est = norm_oracle(&wt, 0, p, q).unwrap();
            let mut f = vec![0.0; wt.tree.len()];
            for (v, x) in est.certificate.clone().unwrap() {
                f[v] = x;
            }
            let ratio = lp_norm(&apply_hardy(&wt, 0, &f), q) / lp_norm(&f, p);
            assert_relative_eq!(ratio, est.value, max_relative = 1e-9);
        }
    }

    #[test]
    fn oracle_scaling_homogeneity() {
        let tree = RootedTree::build(&[(0, 1), (1, 2), (0, 3)], 0).unwrap();
        let wt = WeightedTree::unit(tree.clone());
        let scaled = WeightedTree::new(
            tree,
            vec![3.0; 4],
            vec![0.5; 4],
        )
        .unwrap();
        let a = norm_oracle(&wt, 0, 2.0, 2.0).unwrap().value;
        let b = norm_oracle(&scaled, 0, 2.0, 2.0).unwrap().value;
        assert_relative_eq!(b, 1.5 * a, max_relative = 1e-8);
    }

    #[test]
    fn oracle_monotone_in_subtree() {
        let tree = RootedTree::build(&[(0, 1), (1, 2), (1, 3), (0, 4)], 0).unwrap();
        let wt = WeightedTree::unit(tree);
        let whole = norm_oracle(&wt, 0, 2.0, 2.0).unwrap().value;
        let below = norm_oracle(&wt, 1, 2.0, 2.0).unwrap().value;
        assert!(below <= whole + 1e-12);
    }

    #[test]
    fn boundary_limits_match_interior() {
        let tree = RootedTree::build(&[(0, 1), (0, 2), (1, 3)], 0).unwrap();
        let u: Vec<f64> = vec![1.0, 0.7, 1.4, 0.9];
        let w: Vec<f64> = vec![1.1, 1.0, 0.6, 1.3];
        let wt = WeightedTree::new(tree, u, w).unwrap();
        let at_one = norm_oracle(&wt, 0, 1.0, 2.0).unwrap().value;
        let near_one = norm_oracle(&wt, 0, 1.0001, 2.0).unwrap().value;
        assert!((at_one - near_one).abs() / at_one < 0.02);
        let at_q1 = norm_oracle(&wt, 0, 2.0, 1.0).unwrap().value;
        let near_q1 = norm_oracle(&wt, 0, 2.0, 1.0001).unwrap().value;
        assert!((at_q1 - near_q1).abs() / at_q1 < 0.02);
    }

    #[test]
    fn oracle_size_cap() {
        let wt = path_unit(80);
        assert!(matches!(
            norm_oracle(&wt, 0, 2.0, 2.0),
            Err(Error::TreeTooLarge { .. })
        ));
    }

    #[test]
    fn sequence_constant_flat_weights() {
        // u = w = 1 on {0..3}, p = q = 2: C = max_m sqrt(4-m) sqrt(m+1) = sqrt 6.
        let u = [1.0; 4];
        let w = [1.0; 4];
        let rep = andersen_heinig(&u, &w, 2.0, 2.0, 200, 0).unwrap();
        assert_relative_eq!(rep.constant, 6.0f64.sqrt(), max_relative = 1e-12);
        assert!(rep.probe_ratio >= rep.constant * (1.0 - 1e-12));
    }

    #[test]
    fn sequence_single_spike() {
        let rep = andersen_heinig(&[1.0], &[1.0], 2.0, 2.0, 10, 0).unwrap();
        assert_relative_eq!(rep.constant, 1.0);
        assert_relative_eq!(rep.probe_ratio, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn sequence_dyadic_weights() {
        let u: Vec<f64> = (0..=10).map(|n| (-(n as f64)).exp2()).collect();
        let w = u.clone();
        let rep = andersen_heinig(&u, &w, 2.0, 2.0, 500, 1).unwrap();
        assert!(rep.max_observed_ratio.is_finite());
        assert!(rep.max_observed_ratio <= 4.0 * rep.constant);
    }
}
