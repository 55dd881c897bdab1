//! Evans-Harris-Pick quantities on combinatorial trees: the variational
//! constant of a subtree, its bottom-up recursion, the derived scalars
//! `S, Q, R`, the subtree-supremum norm characterization, and the
//! level-regularity measurements that drive the reduction brackets.

use crate::error::{Error, Result};
use crate::hardy::WeightedTree;
use crate::par::par_map;
use crate::tree::{
    enumerate_admissible_capped, sample_admissible, SubtreeSelection, ENUMERATION_SIZE_CAP,
};
use crate::weights::conjugate;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Scalars attached to a member of the admissible family.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EhpScalars {
    pub beta: f64,
    pub b: f64,
    pub s: f64,
    pub q: f64,
    pub r: f64,
}

/// Constraint matrix of the variational problem: one row per maximal vertex,
/// one column per member, entry `u(col)` when the member lies on the segment
/// from the base to that maximal vertex.
fn constraint_matrix(wt: &WeightedTree, d: &SubtreeSelection) -> (DMatrix<f64>, Vec<usize>, Vec<usize>) {
    let members = d.members.clone();
    let maxima = d.maxima(&wt.tree);
    let mut col_of = std::collections::HashMap::new();
    for (i, &v) in members.iter().enumerate() {
        col_of.insert(v, i);
    }
    let mut a = DMatrix::zeros(maxima.len(), members.len());
    for (row, &mx) in maxima.iter().enumerate() {
        let mut v = mx;
        loop {
            a[(row, col_of[&v])] = wt.u[v];
            if v == d.base {
                break;
            }
            v = wt.tree.parent(v).expect("members reach the base");
        }
    }
    (a, members, maxima)
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        x.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    } else {
        x.iter().map(|&v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn solve_spd(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    if let Some(ch) = m.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    m.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Internal("constraint Gram matrix is singular".into()))
}

/// Least `l_p`-norm function meeting the unit-accumulation constraint at
/// every maximal vertex of `d`. Returns the value and the witness on the
/// full vertex range (zero off the selection). Requires `1 < p < inf`.
pub fn beta_variational(
    wt: &WeightedTree,
    d: &SubtreeSelection,
    p: f64,
) -> Result<(f64, Vec<f64>)> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in (1, inf)")));
    }
    let (a, members, _) = constraint_matrix(wt, d);
    let ones = DVector::from_element(a.nrows(), 1.0);
    // p = 2 seed: least-norm solution f = A^T (A A^T)^{-1} 1.
    let gram = &a * a.transpose();
    let lambda = solve_spd(&gram, &ones)?;
    let mut f = (a.transpose() * &lambda).column(0).iter().copied().collect::<Vec<f64>>();

    if (p - 2.0).abs() > 1e-14 {
        irls(&a, &mut f, p)?;
        newton_polish(&a, &mut f, p)?;
        // Exact feasibility restore: project the residual back.
        let resid = &ones - &a * DVector::from_column_slice(&f);
        let corr = a.transpose() * solve_spd(&gram, &resid)?;
        for (fi, c) in f.iter_mut().zip(corr.iter()) {
            *fi += c;
        }
    }
    let beta = lp_norm(&f, p);
    let mut full = vec![0.0; wt.tree.len()];
    for (i, &v) in members.iter().enumerate() {
        full[v] = f[i];
    }
    Ok((beta, full))
}

/// Iteratively reweighted least squares from the `p = 2` seed, damping 0.5,
/// 500-iteration cap. Falls back to projected subgradient steps on stall.
fn irls(a: &DMatrix<f64>, f: &mut Vec<f64>, p: f64) -> Result<()> {
    let ones = DVector::from_element(a.nrows(), 1.0);
    let mut eps = 1e-3f64;
    let mut stalled = true;
    for iter in 0..500 {
        let weights: Vec<f64> = f.iter().map(|&x| x.abs().max(eps).powf(p - 2.0)).collect();
        // Weighted least norm: f = W^{-1} A^T (A W^{-1} A^T)^{-1} 1.
        let mut awa = DMatrix::zeros(a.nrows(), a.nrows());
        for i in 0..a.nrows() {
            for j in 0..a.nrows() {
                let mut s = 0.0;
                for k in 0..a.ncols() {
                    s += a[(i, k)] * a[(j, k)] / weights[k];
                }
                awa[(i, j)] = s;
            }
        }
        let lambda = solve_spd(&awa, &ones)?;
        let mut next = vec![0.0; a.ncols()];
        for k in 0..a.ncols() {
            let mut s = 0.0;
            for i in 0..a.nrows() {
                s += a[(i, k)] * lambda[i];
            }
            next[k] = s / weights[k];
        }
        let mut delta = 0.0f64;
        for (fi, ni) in f.iter_mut().zip(&next) {
            let blended = 0.5 * *fi + 0.5 * ni;
            delta = delta.max((blended - *fi).abs());
            *fi = blended;
        }
        let scale = 1.0 + lp_norm(f, f64::INFINITY);
        if delta < 1e-10 * scale {
            if eps <= 1e-13 {
                stalled = false;
                break;
            }
            eps *= 1e-2;
        }
        if iter == 499 {
            stalled = delta >= 1e-8 * scale;
        }
    }
    if stalled {
        projected_subgradient(a, f, p)?;
    }
    Ok(())
}

fn projected_subgradient(a: &DMatrix<f64>, f: &mut [f64], p: f64) -> Result<()> {
    let gram = a * a.transpose();
    let mut step = 0.1 * (1.0 + lp_norm(f, f64::INFINITY));
    let mut best = lp_norm(f, p);
    for _ in 0..2000 {
        let g: Vec<f64> = f.iter().map(|&x| x.abs().powf(p - 1.0) * x.signum()).collect();
        // Project the gradient onto the null space of A.
        let ag = a * DVector::from_column_slice(&g);
        let corr = a.transpose() * solve_spd(&gram, &ag)?;
        let cand: Vec<f64> = f
            .iter()
            .zip(g.iter().zip(corr.iter()))
            .map(|(&fi, (&gi, &ci))| fi - step * (gi - ci))
            .collect();
        let val = lp_norm(&cand, p);
        if val < best {
            best = val;
            f.copy_from_slice(&cand);
        } else {
            step *= 0.5;
            if step < 1e-14 {
                break;
            }
        }
    }
    Ok(())
}

/// Newton on the dual stationarity system `A phi(A^T lambda) = 1` with
/// `phi(s) = sign(s) |s|^{1/(p-1)}`; tightens the IRLS iterate.
fn newton_polish(a: &DMatrix<f64>, f: &mut [f64], p: f64) -> Result<()> {
    let m = a.nrows();
    let ones = DVector::from_element(m, 1.0);
    let gram = a * a.transpose();
    // lambda from least-squares stationarity fit A^T lambda ~ psi(f).
    let psi: Vec<f64> = f.iter().map(|&x| x.abs().powf(p - 1.0) * x.signum()).collect();
    let mut lambda = solve_spd(&gram, &(a * DVector::from_column_slice(&psi)))?;
    let exponent = 1.0 / (p - 1.0);
    let phi = |s: f64| s.signum() * s.abs().powf(exponent);
    let dphi = |s: f64| {
        if s == 0.0 {
            0.0
        } else {
            exponent * s.abs().powf(exponent - 1.0)
        }
    };
    let eval = |lambda: &DVector<f64>| -> (DVector<f64>, Vec<f64>) {
        let s = a.transpose() * lambda;
        let fv: Vec<f64> = s.iter().map(|&x| phi(x)).collect();
        let g = a * DVector::from_column_slice(&fv) - &ones;
        (g, fv)
    };
    let (mut g, mut fv) = eval(&lambda);
    for _ in 0..100 {
        if g.norm() < 1e-13 * (m as f64).sqrt() {
            break;
        }
        let s = a.transpose() * &lambda;
        let dp: Vec<f64> = s.iter().map(|&x| dphi(x)).collect();
        let mut jac = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0.0;
                for k in 0..a.ncols() {
                    acc += a[(i, k)] * a[(j, k)] * dp[k];
                }
                jac[(i, j)] = acc;
            }
        }
        let Some(step) = jac.lu().solve(&g) else { break };
        // Backtracking on the residual norm.
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = &lambda - t * &step;
            let (gc, fc) = eval(&cand);
            if gc.norm() < g.norm() {
                lambda = cand;
                g = gc;
                fv = fc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    // Accept the Newton point only when it is an improvement.
    if lp_norm(&fv, p) <= lp_norm(f, p) + 1e-12 {
        f.copy_from_slice(&fv);
    }
    Ok(())
}

/// `B = 1/beta` by the bottom-up join rule
/// `B^{p'} = u(base)^{p'} + (sum_i B_i^{-p})^{-p'/p}`, leaf base `B = u`.
pub fn b_recursive(wt: &WeightedTree, d: &SubtreeSelection, p: f64) -> f64 {
    b_rec_at(wt, d, d.base, p)
}

fn b_rec_at(wt: &WeightedTree, d: &SubtreeSelection, v: usize, p: f64) -> f64 {
    let kids: Vec<usize> = wt
        .tree
        .children(v)
        .iter()
        .copied()
        .filter(|c| d.contains(*c))
        .collect();
    if kids.is_empty() {
        return wt.u[v];
    }
    let inner = if p.is_infinite() {
        // || (beta_i) ||_inf^{-1} = min B_i.
        kids.iter().map(|&c| b_rec_at(wt, d, c, p)).fold(f64::INFINITY, f64::min)
    } else {
        let sum: f64 = kids.iter().map(|&c| b_rec_at(wt, d, c, p).powf(-p)).sum();
        sum.powf(-1.0 / p)
    };
    let pp = conjugate(p);
    if pp.is_infinite() {
        wt.u[v].max(inner)
    } else {
        (wt.u[v].powf(pp) + inner.powf(pp)).powf(1.0 / pp)
    }
}

/// All five scalars of a selection: `S` from maximal `u`-values with exponent
/// `p`, `Q`/`R` from `w`-values with exponent `q` (`R` sums over the whole
/// host subtree above each maximal vertex), `B` by recursion, `beta = 1/B`.
pub fn scalars(wt: &WeightedTree, d: &SubtreeSelection, p: f64, q: f64) -> EhpScalars {
    let sums = wt.subtree_w_pow_sums(q);
    scalars_with_sums(wt, d, p, q, &sums)
}

pub fn scalars_with_sums(
    wt: &WeightedTree,
    d: &SubtreeSelection,
    p: f64,
    q: f64,
    subtree_w_sums: &[f64],
) -> EhpScalars {
    let maxima = d.maxima(&wt.tree);
    let s = maxima
        .iter()
        .map(|&v| wt.u[v].powf(-p))
        .sum::<f64>()
        .powf(-1.0 / p);
    let qv = maxima
        .iter()
        .map(|&v| wt.w[v].powf(q))
        .sum::<f64>()
        .powf(1.0 / q);
    let r = maxima
        .iter()
        .map(|&v| subtree_w_sums[v])
        .sum::<f64>()
        .powf(1.0 / q);
    let b = b_recursive(wt, d, p);
    EhpScalars { beta: 1.0 / b, b, s, q: qv, r }
}

/// The two subtree suprema of the norm characterization, with maximizers.
#[derive(Debug, Clone, Serialize)]
pub struct SubtreeSupremum {
    pub sup_rb: f64,
    pub sup_qs: f64,
    pub argmax_rb: SubtreeSelection,
    pub argmax_qs: SubtreeSelection,
    /// False when the family was sampled instead of enumerated; the suprema
    /// are then lower bounds.
    pub exhaustive: bool,
    pub family_size: usize,
}

pub fn norm_via_subtrees(wt: &WeightedTree, base: usize, p: f64) -> Result<SubtreeSupremum> {
    norm_via_subtrees_with(wt, base, p, ENUMERATION_SIZE_CAP, 4096, 0)
}

pub fn norm_via_subtrees_with(
    wt: &WeightedTree,
    base: usize,
    p: f64,
    size_cap: usize,
    sample_size: usize,
    seed: u64,
) -> Result<SubtreeSupremum> {
    let (family, exhaustive) = match enumerate_admissible_capped(&wt.tree, base, size_cap) {
        Ok(f) => (f, true),
        Err(Error::EnumerationCap { .. }) | Err(Error::EnumerationCount { .. }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (sample_admissible(&wt.tree, base, sample_size, &mut rng), false)
        }
        Err(e) => return Err(e),
    };
    let sums = wt.subtree_w_pow_sums(p);
    let scs: Vec<EhpScalars> =
        par_map(&family, |d| scalars_with_sums(wt, d, p, p, &sums));
    let mut sup_rb = f64::NEG_INFINITY;
    let mut sup_qs = f64::NEG_INFINITY;
    let mut arg_rb = 0usize;
    let mut arg_qs = 0usize;
    for (i, sc) in scs.iter().enumerate() {
        if sc.r * sc.b > sup_rb {
            sup_rb = sc.r * sc.b;
            arg_rb = i;
        }
        if sc.q * sc.s > sup_qs {
            sup_qs = sc.q * sc.s;
            arg_qs = i;
        }
    }
    Ok(SubtreeSupremum {
        sup_rb,
        sup_qs,
        argmax_rb: family[arg_rb].clone(),
        argmax_qs: family[arg_qs].clone(),
        exhaustive,
        family_size: family.len(),
    })
}

/// Measured regularity constants of a level-weighted tree.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RegularityReport {
    /// Tightest constant in `card V_{j-j0}(xi) <= C* 2^{psi(j)-psi(j0)}`.
    pub c_star: f64,
    /// Smallest admissible sigma for the u-growth condition; below 1 means
    /// the condition holds with that sigma.
    pub sigma_u: f64,
    /// Smallest admissible sigma for the w-decay condition.
    pub sigma_w: f64,
    /// Branching/adjacent-weight-ratio bound.
    pub c_hat: f64,
}

/// Per-level weights recovered from a weighted tree; errors unless `u` and
/// `w` are constant on each level.
pub fn level_profile(wt: &WeightedTree) -> Result<(Vec<f64>, Vec<f64>)> {
    let depth = wt.tree.max_depth();
    let mut u = vec![f64::NAN; depth + 1];
    let mut w = vec![f64::NAN; depth + 1];
    for v in wt.tree.vertices() {
        let l = wt.tree.depth(v);
        for (slot, val) in [(&mut u[l], wt.u[v]), (&mut w[l], wt.w[v])] {
            if slot.is_nan() {
                *slot = val;
            } else if (*slot - val).abs() > 1e-12 * slot.abs() {
                return Err(Error::WeightsNotLevelConstant { level: l, a: *slot, b: val });
            }
        }
    }
    Ok((u, w))
}

pub fn regularity_report(wt: &WeightedTree, psi: &[f64], p: f64) -> Result<RegularityReport> {
    let (u, w) = level_profile(wt)?;
    let depth = wt.tree.max_depth();
    if psi.len() < depth + 1 {
        return Err(Error::InvalidParameter(format!(
            "psi must cover levels 0..={depth}"
        )));
    }
    let pp = conjugate(p);
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };

    let mut c_star = 0.0f64;
    for v in wt.tree.vertices() {
        let j0 = wt.tree.depth(v);
        let mut frontier = vec![v];
        let mut j = j0;
        while !frontier.is_empty() {
            let ratio = frontier.len() as f64 / (psi[j] - psi[j0]).exp2();
            c_star = c_star.max(ratio);
            let mut next = Vec::new();
            for &x in &frontier {
                next.extend_from_slice(wt.tree.children(x));
            }
            frontier = next;
            j += 1;
        }
    }

    let mut sigma_u = 0.0f64;
    let mut sigma_w = 0.0f64;
    for j in 1..=depth {
        let ru = (u[j] * (-psi[j] * inv_p).exp2()) / (u[j - 1] * (-psi[j - 1] * inv_p).exp2());
        sigma_u = sigma_u.max(if pp.is_infinite() {
            // p = 1: the condition reads ratio >= 1.
            if ru >= 1.0 { 0.0 } else { f64::INFINITY }
        } else {
            ru.powf(-pp)
        });
        let rw = (w[j] * (psi[j] * inv_p).exp2()) / (w[j - 1] * (psi[j - 1] * inv_p).exp2());
        sigma_w = sigma_w.max(if p.is_infinite() {
            if rw <= 1.0 { 0.0 } else { f64::INFINITY }
        } else {
            rw.powf(p)
        });
    }

    let mut c_hat = 1.0f64;
    for v in wt.tree.vertices() {
        c_hat = c_hat.max(wt.tree.children(v).len() as f64);
        if let Some(parent) = wt.tree.parent(v) {
            for (a, b) in [(wt.u[v], wt.u[parent]), (wt.w[v], wt.w[parent])] {
                c_hat = c_hat.max(a / b).max(b / a);
            }
        }
    }

    Ok(RegularityReport { c_star, sigma_u, sigma_w, c_hat })
}

/// Outcome of the reduction brackets for one selection.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionVerdict {
    pub scalars: EhpScalars,
    pub ratio_b_over_s: f64,
    pub ratio_r_over_q: f64,
    /// `S <= B`, asserted with no hypotheses.
    pub unconditional_pass: bool,
    /// Whether the measured sigmas were small enough to assert the two-sided
    /// brackets.
    pub conditional_checked: bool,
    pub conditional_pass: Option<bool>,
}

pub const SIGMA_THRESHOLD: f64 = 0.01;

pub fn reduction_check(
    wt: &WeightedTree,
    d: &SubtreeSelection,
    p: f64,
    report: &RegularityReport,
    sigma0: f64,
) -> ReductionVerdict {
    let sc = scalars(wt, d, p, p);
    let ratio_b_over_s = sc.b / sc.s;
    let ratio_r_over_q = sc.r / sc.q;
    let unconditional_pass = sc.s <= sc.b * (1.0 + 1e-12) && sc.q <= sc.r * (1.0 + 1e-12);
    let conditional_checked = report.sigma_u <= sigma0 && report.sigma_w <= sigma0;
    let conditional_pass = conditional_checked
        .then(|| ratio_b_over_s <= 2.0 + 1e-12 && ratio_r_over_q <= 2.0 + 1e-12);
    ReductionVerdict {
        scalars: sc,
        ratio_b_over_s,
        ratio_r_over_q,
        unconditional_pass,
        conditional_checked,
        conditional_pass,
    }
}

/// For each interior vertex of `d`, the children whose `B^{-p}` is at least
/// `eps` times the sibling mean. At least one child per interior vertex
/// qualifies for any `eps < 1`.
pub fn epsilon_regular_vertices(
    wt: &WeightedTree,
    d: &SubtreeSelection,
    p: f64,
    eps: f64,
) -> Vec<(usize, Vec<usize>)> {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    let mut out = Vec::new();
    for v in d.interior(&wt.tree) {
        let kids: Vec<usize> = wt.tree.children(v).to_vec();
        let bs: Vec<f64> = kids
            .iter()
            .map(|&c| b_rec_at(wt, d, c, p).powf(-p))
            .collect();
        let mean = bs.iter().sum::<f64>() / bs.len() as f64;
        let regular: Vec<usize> = kids
            .iter()
            .zip(&bs)
            .filter(|(_, &b)| b >= eps * mean)
            .map(|(&c, _)| c)
            .collect();
        out.push((v, regular));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{enumerate_admissible, RootedTree};
    use approx::assert_relative_eq;

    fn whole(tree: &RootedTree) -> SubtreeSelection {
        SubtreeSelection::new(tree, tree.root(), tree.vertices().collect()).unwrap()
    }

    #[test]
    fn beta_single_vertex_is_inverse_weight() {
        let tree = RootedTree::singleton();
        let wt = WeightedTree::new(tree.clone(), vec![2.0], vec![1.0]).unwrap();
        let d = SubtreeSelection::singleton(0);
        let (beta, _) = beta_variational(&wt, &d, 2.0).unwrap();
        assert_relative_eq!(beta, 0.5, max_relative = 1e-12);
        assert_relative_eq!(b_recursive(&wt, &d, 2.0), 2.0);
    }

    #[test]
    fn beta_path_of_four() {
        let tree = RootedTree::path(4);
        let wt = WeightedTree::unit(tree.clone());
        let d = whole(&tree);
        let (beta, f) = beta_variational(&wt, &d, 2.0).unwrap();
        assert_relative_eq!(beta, 0.5, max_relative = 1e-10);
        for v in 0..4 {
            assert_relative_eq!(f[v], 0.25, max_relative = 1e-9);
        }
    }

    #[test]
    fn beta_star_symmetric() {
        let tree = RootedTree::star(4);
        let wt = WeightedTree::unit(tree.clone());
        let d = whole(&tree);
        let (beta, f) = beta_variational(&wt, &d, 2.0).unwrap();
        assert_relative_eq!(beta, 1.0 / 1.25f64.sqrt(), max_relative = 1e-10);
        assert_relative_eq!(f[0], 0.8, max_relative = 1e-9);
        assert_relative_eq!(f[1], 0.2, max_relative = 1e-9);
        // Recursion agrees: B^2 = 1 + 1/4.
        assert_relative_eq!(b_recursive(&wt, &d, 2.0), 1.25f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn recursion_matches_variational_nontrivial_p() {
        let tree = RootedTree::build(&[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6)], 0).unwrap();
        let u: Vec<f64> = (0..7).map(|i| 0.6 + 0.4 * (i as f64 * 0.9).sin().abs()).collect();
        let wt = WeightedTree::new(tree.clone(), u, vec![1.0; 7]).unwrap();
        for p in [1.5, 2.0, 3.0] {
            for d in enumerate_admissible(&tree, 0).unwrap() {
                let (beta, _) = beta_variational(&wt, &d, p).unwrap();
                let b = b_recursive(&wt, &d, p);
                assert!(
                    (b * beta - 1.0).abs() <= 1e-6,
                    "p={p} d={:?}: b*beta = {}",
                    d.members,
                    b * beta
                );
            }
        }
    }

    #[test]
    fn scalar_formulas_star() {
        let tree = RootedTree::star(4);
        let wt = WeightedTree::unit(tree.clone());
        let d = whole(&tree);
        let sc = scalars(&wt, &d, 2.0, 2.0);
        assert_relative_eq!(sc.s, 0.5);
        assert_relative_eq!(sc.q, 2.0);
        assert_relative_eq!(sc.r, 2.0);
        assert_relative_eq!(sc.b * sc.beta, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn scalar_formulas_root_selection_in_path() {
        let tree = RootedTree::path(3);
        let wt = WeightedTree::unit(tree.clone());
        let d = SubtreeSelection::singleton(0);
        let sc = scalars(&wt, &d, 2.0, 2.0);
        assert_relative_eq!(sc.r, 3.0f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(sc.q, 1.0);
    }

    #[test]
    fn scalar_homogeneity_in_u() {
        let tree = RootedTree::build(&[(0, 1), (0, 2), (2, 3)], 0).unwrap();
        let wt = WeightedTree::unit(tree.clone());
        let wt2 = WeightedTree::new(tree.clone(), vec![2.0; 4], vec![1.0; 4]).unwrap();
        let d = whole(&tree);
        let a = scalars(&wt, &d, 2.0, 2.0);
        let b = scalars(&wt2, &d, 2.0, 2.0);
        assert_relative_eq!(b.s, 2.0 * a.s, max_relative = 1e-12);
        assert_relative_eq!(b.b, 2.0 * a.b, max_relative = 1e-12);
        assert_relative_eq!(b.q, a.q);
        assert_relative_eq!(b.r, a.r);
    }

    #[test]
    fn subtree_sup_single_vertex() {
        let wt = WeightedTree::unit(RootedTree::singleton());
        let sup = norm_via_subtrees(&wt, 0, 2.0).unwrap();
        assert_relative_eq!(sup.sup_rb, 1.0);
        assert_relative_eq!(sup.sup_qs, 1.0);
    }

    #[test]
    fn subtree_sup_path2() {
        let wt = WeightedTree::unit(RootedTree::path(2));
        let sup = norm_via_subtrees(&wt, 0, 2.0).unwrap();
        // D = {0}: R = sqrt 2, B = 1; D = {0,1}: R = 1, B = sqrt 2.
        assert_relative_eq!(sup.sup_rb, 2.0f64.sqrt(), max_relative = 1e-12);
        let exact = crate::hardy::norm_oracle(&wt, 0, 2.0, 2.0).unwrap().value;
        let ratio = exact / sup.sup_rb;
        assert!((1.0..=4.0).contains(&ratio), "bracket ratio {ratio}");
    }

    #[test]
    fn regularity_example_ratios() {
        // u_j = 2^j, w_j = 2^{-j}, psi(j) = j, p = 2: sigma_u = 1/2.
        let tree = RootedTree::path(4);
        let u: Vec<f64> = (0..4).map(|j| (j as f64).exp2()).collect();
        let w: Vec<f64> = (0..4).map(|j| (-(j as f64)).exp2()).collect();
        let wt = WeightedTree::new(tree, u, w).unwrap();
        let psi: Vec<f64> = (0..4).map(|j| j as f64).collect();
        let rep = regularity_report(&wt, &psi, 2.0).unwrap();
        assert_relative_eq!(rep.sigma_u, 0.5, max_relative = 1e-12);
        // Binary tree with psi(j) = j has C* = 1.
        let bin = RootedTree::build(&[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)], 0).unwrap();
        let wt = WeightedTree::unit(bin);
        let rep = regularity_report(&wt, &[0.0, 1.0, 2.0], 2.0).unwrap();
        assert_relative_eq!(rep.c_star, 1.0, max_relative = 1e-12);
        // Constant u with psi(j) = j forces sigma_u = 2^{p'/p}.
        let tree = RootedTree::path(3);
        let wt = WeightedTree::unit(tree);
        let rep = regularity_report(&wt, &[0.0, 1.0, 2.0], 2.0).unwrap();
        assert_relative_eq!(rep.sigma_u, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn level_profile_rejects_uneven_weights() {
        let tree = RootedTree::star(2);
        let wt = WeightedTree::new(tree, vec![1.0, 1.0, 2.0], vec![1.0; 3]).unwrap();
        assert!(matches!(
            level_profile(&wt),
            Err(Error::WeightsNotLevelConstant { .. })
        ));
    }

    #[test]
    fn reduction_star_counterexample() {
        // Constant weights on a star: sigma is large, so only the
        // unconditional direction is asserted; B > 2S shows the conditional
        // bound genuinely needs the hypothesis.
        let tree = RootedTree::star(4);
        let wt = WeightedTree::unit(tree.clone());
        let rep = regularity_report(&wt, &[0.0, 2.0], 2.0).unwrap();
        let d = whole(&tree);
        let verdict = reduction_check(&wt, &d, 2.0, &rep, SIGMA_THRESHOLD);
        assert!(verdict.unconditional_pass);
        assert!(!verdict.conditional_checked);
        assert!(verdict.ratio_b_over_s > 2.0);
    }

    #[test]
    fn reduction_fast_growth_passes() {
        // u_j = 100^j makes sigma tiny; the two-sided brackets hold.
        let tree = RootedTree::build(&[(0, 1), (1, 2), (2, 3)], 0).unwrap();
        let u: Vec<f64> = (0..4).map(|j| 100f64.powi(j)).collect();
        let w: Vec<f64> = (0..4).map(|j| 100f64.powi(-j)).collect();
        let wt = WeightedTree::new(tree.clone(), u, w).unwrap();
        let rep = regularity_report(&wt, &[0.0, 0.0, 0.0, 0.0], 2.0).unwrap();
        assert!(rep.sigma_u < SIGMA_THRESHOLD && rep.sigma_w < SIGMA_THRESHOLD);
        for d in enumerate_admissible(&tree, 0).unwrap() {
            let verdict = reduction_check(&wt, &d, 2.0, &rep, SIGMA_THRESHOLD);
            assert!(verdict.unconditional_pass);
            assert_eq!(verdict.conditional_pass, Some(true));
        }
    }

    #[test]
    fn single_vertex_s_equals_b() {
        let wt = WeightedTree::new(RootedTree::singleton(), vec![1.7], vec![0.4]).unwrap();
        let sc = scalars(&wt, &SubtreeSelection::singleton(0), 2.0, 2.0);
        assert_relative_eq!(sc.s, sc.b, max_relative = 1e-12);
    }

    #[test]
    fn epsilon_regular_marking() {
        // Two leaf children with B_1^{-p} = 9 B_2^{-p} (u_1 = 1/3, u_2 = 1):
        // at eps = 0.5 only the heavy child is regular.
        let tree = RootedTree::star(2);
        let wt =
            WeightedTree::new(tree.clone(), vec![1.0, 1.0 / 3.0, 1.0], vec![1.0; 3]).unwrap();
        let d = whole(&tree);
        let marks = epsilon_regular_vertices(&wt, &d, 2.0, 0.5);
        assert_eq!(marks.len(), 1);
        assert_eq!(marks[0].1, vec![1]);
        // Symmetric children are all regular for any eps < 1.
        let wt = WeightedTree::unit(tree.clone());
        let marks = epsilon_regular_vertices(&wt, &d, 2.0, 0.99);
        assert_eq!(marks[0].1.len(), 2);
        // eps -> 1 keeps only the argmax child.
        let wt = WeightedTree::new(tree, vec![1.0, 0.5, 1.0], vec![1.0; 3]).unwrap();
        let marks = epsilon_regular_vertices(&wt, &d, 2.0, 0.999);
        assert_eq!(marks[0].1, vec![1]);
    }

    #[test]
    fn every_interior_vertex_keeps_a_regular_child() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(2..10);
            let edges: Vec<(usize, usize)> =
                (1..n).map(|v| (rng.random_range(0..v), v)).collect();
            let tree = RootedTree::build(&edges, 0).unwrap();
            let u: Vec<f64> = (0..n).map(|_| rng.random_range(0.25..4.0)).collect();
            let wt = WeightedTree::new(tree.clone(), u, vec![1.0; n]).unwrap();
            for d in enumerate_admissible(&tree, 0).unwrap() {
                for (_, regular) in epsilon_regular_vertices(&wt, &d, 2.0, 0.7) {
                    assert!(!regular.is_empty());
                }
            }
        }
    }
}
