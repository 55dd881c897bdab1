//! Embedding-constant experiments on the quotient tree: the measured
//! discrete Hardy norm against the closed-form prediction, scaling sweeps
//! over the anchor level, a direct grid check of the `r = 1` inequality, and
//! the bump-family witness that the inequality fails outside the admissible
//! parameter range.

use crate::ehp;
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, DomainTree, GammaSet, Quotient};
use crate::hardy::{norm_oracle_with, NormMethod, OracleOptions, WeightedTree};
use crate::par::par_map;
use crate::tree::RootedTree;
use crate::weights::{psi, Classification, ExponentConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Measured-versus-predicted bound at one anchor level.
#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    pub j0: u32,
    pub case: Classification,
    pub measured: f64,
    pub predicted: f64,
    pub ratio: f64,
    pub method: NormMethod,
    pub subtree_size: usize,
    /// Regularity of the instantiated level weights.
    pub sigma_u: f64,
    pub sigma_w: f64,
    pub c_star: f64,
}

/// The weighted quotient subtree anchored at band `j0`, with weights from
/// the exponent pack. The generator-order reduction replaces `beta_g` by
/// `beta_g + d - r`, folding the kernel power into the weight so the
/// discrete norm scales exactly like the embedding constant.
pub fn quotient_weighted_subtree(
    quo: &Quotient,
    cfg: &ExponentConfig,
    j0: u32,
) -> Result<(WeightedTree, u32)> {
    let candidates = quo.vertices_at_band(j0);
    let anchor = candidates
        .iter()
        .copied()
        .max_by_key(|&v| (quo.tree.subtree(v).len(), std::cmp::Reverse(v)))
        .ok_or_else(|| Error::InvalidParameter(format!("no quotient vertex at band {j0}")))?;
    let vertices = quo.tree.subtree(anchor);
    let mut local = vec![usize::MAX; quo.tree.len()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let edges: Vec<(usize, usize)> = vertices
        .iter()
        .skip(1)
        .map(|&v| (local[quo.tree.parent(v).expect("subtree vertex")], local[v]))
        .collect();
    let tree = RootedTree::build(&edges, 0)?;

    let m = quo.m;
    let d = cfg.d as f64;
    let beta_g_eff = cfg.beta_g + d - cfg.r as f64;
    let mut u = Vec::with_capacity(vertices.len());
    let mut w = Vec::with_capacity(vertices.len());
    for (i, &v) in vertices.iter().enumerate() {
        debug_assert_eq!(quo.band[v], j0 + tree.depth(i) as u32);
        let y = (m * quo.band[v]) as f64;
        let log2_u = y * (beta_g_eff - d / cfg.p_prime()) + cfg.psi_g.log2_at_dyadic(y);
        let log2_w = y * (cfg.beta_v - d / cfg.q) + cfg.psi_v.log2_at_dyadic(y);
        u.push(log2_u.exp2());
        w.push(log2_w.exp2());
    }
    Ok((WeightedTree::new(tree, u, w)?, m))
}

/// The closed-form bound `C(j0)` the estimates prove.
pub fn predicted_constant(cfg: &ExponentConfig, m: u32, j0: u32) -> Result<f64> {
    match cfg.validate() {
        Classification::CaseA => {
            let y = (m * j0) as f64;
            let t = (-y).exp2();
            Ok(((cfg.beta() - cfg.delta()) * y).exp2()
                * cfg.psi_g.log_part(-t.log2())
                * cfg.psi_v.log_part(-t.log2()))
        }
        Classification::CaseB => {
            if j0 == 0 {
                return Err(Error::InvalidParameter(
                    "the borderline bound needs a positive anchor level".into(),
                ));
            }
            let gap = cfg.qp_gap();
            let j = j0 as f64;
            let rho = cfg.psi_g.slow.eval(j) * cfg.psi_v.slow.eval(j);
            Ok((-(m as f64) * cfg.theta() * gap * j).exp2() * j.powf(-cfg.alpha() + gap) * rho)
        }
        Classification::Invalid(msg) => Err(Error::InvalidConfig(msg)),
    }
}

pub fn constant_bound(
    quo: &Quotient,
    cfg: &ExponentConfig,
    j0: u32,
    oracle_cap: usize,
) -> Result<EmbeddingReport> {
    let case = cfg.validate();
    if let Classification::Invalid(msg) = case {
        return Err(Error::InvalidConfig(msg));
    }
    let (wt, m) = quotient_weighted_subtree(quo, cfg, j0)?;
    let n = wt.tree.len();
    let opts = OracleOptions { size_cap: oracle_cap, ..OracleOptions::default() };
    let (measured, method) = match norm_oracle_with(&wt, 0, cfg.p, cfg.q, opts) {
        Ok(est) => (est.value, est.method),
        Err(Error::TreeTooLarge { .. }) => {
            let sup = ehp::norm_via_subtrees(&wt, 0, cfg.p)?;
            (sup.sup_rb, NormMethod::SubtreeSup)
        }
        Err(e) => return Err(e),
    };
    let predicted = predicted_constant(cfg, m, j0)?;

    let depth = wt.tree.max_depth() as u32;
    let psi_vals: Vec<f64> =
        (0..=depth).map(|l| psi(cfg, m, j0 + l) - psi(cfg, m, j0)).collect();
    let reg_p = if cfg.p.is_finite() { cfg.p } else { 2.0 };
    let reg = ehp::regularity_report(&wt, &psi_vals, reg_p)?;

    Ok(EmbeddingReport {
        j0,
        case,
        measured,
        predicted,
        ratio: measured / predicted,
        method,
        subtree_size: n,
        sigma_u: reg.sigma_u,
        sigma_w: reg.sigma_w,
        c_star: reg.c_star,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub rows: Vec<EmbeddingReport>,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    /// Max over min of `measured / predicted` across the sweep.
    pub ratio_spread: f64,
}

/// Least-squares slope of `log2(measured)` against the anchor level (or
/// against `log2 j0` after peeling the geometric prefactor in the borderline
/// case).
pub fn scaling_sweep(
    quo: &Quotient,
    cfg: &ExponentConfig,
    j0_range: std::ops::RangeInclusive<u32>,
    oracle_cap: usize,
) -> Result<SweepReport> {
    let j0s: Vec<u32> = j0_range.collect();
    if j0s.len() < 4 {
        return Err(Error::InvalidParameter("sweep needs at least 4 anchor levels".into()));
    }
    let rows: Vec<Result<EmbeddingReport>> =
        par_map(&j0s, |&j0| constant_bound(quo, cfg, j0, oracle_cap));
    let rows: Vec<EmbeddingReport> = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let case = cfg.validate();
    let m = quo.m as f64;
    let gap = cfg.qp_gap();
    let (xs, ys): (Vec<f64>, Vec<f64>) = match &case {
        Classification::CaseA => rows.iter().map(|r| (r.j0 as f64, r.measured.log2())).unzip(),
        Classification::CaseB => rows
            .iter()
            .map(|r| {
                let corrected = r.measured.log2() + m * cfg.theta() * gap * r.j0 as f64;
                ((r.j0 as f64).log2(), corrected)
            })
            .unzip(),
        Classification::Invalid(msg) => return Err(Error::InvalidConfig(msg.clone())),
    };
    let predicted_slope = match case {
        Classification::CaseA => m * (cfg.beta() - cfg.delta()),
        _ => -cfg.alpha() + gap,
    };
    let nf = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let fitted_slope = cov / var;
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let ratio_spread = ratios.iter().cloned().fold(f64::MIN, f64::max)
        / ratios.iter().cloned().fold(f64::MAX, f64::min);
    Ok(SweepReport { rows, fitted_slope, predicted_slope, ratio_spread })
}

#[derive(Debug, Clone)]
enum TestFunction {
    Constant,
    Linear { a: [f64; 2], b: f64 },
    Trig { terms: Vec<(f64, [f64; 2], f64)> },
    Bump { center: [f64; 2], width: f64 },
}

impl TestFunction {
    fn eval(&self, x: [f64; 2]) -> f64 {
        match self {
            TestFunction::Constant => 1.0,
            TestFunction::Linear { a, b } => a[0] * x[0] + a[1] * x[1] + b,
            TestFunction::Trig { terms } => terms
                .iter()
                .map(|&(amp, k, phase)| {
                    amp * (std::f64::consts::TAU * (k[0] * x[0] + k[1] * x[1]) + phase).cos()
                })
                .sum(),
            TestFunction::Bump { center, width } => {
                let r2 = (x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2);
                (-r2 / (2.0 * width * width)).exp()
            }
        }
    }
}

/// Constant + linear + random trigonometric polynomials + radial bumps.
fn grid_family(seed: u64) -> Vec<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fam = vec![
        TestFunction::Constant,
        TestFunction::Linear { a: [1.0, 0.5], b: -0.3 },
    ];
    for _ in 0..3 {
        let terms = (0..4)
            .map(|_| {
                (
                    rng.random_range(-1.0..1.0),
                    [
                        rng.random_range(-2i32..3) as f64,
                        rng.random_range(-2i32..3) as f64,
                    ],
                    rng.random_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        fam.push(TestFunction::Trig { terms });
    }
    for _ in 0..3 {
        fam.push(TestFunction::Bump {
            center: [rng.random_range(0.2..0.8), rng.random_range(0.2..0.8)],
            width: rng.random_range(0.1..0.3),
        });
    }
    fam
}

#[derive(Debug, Clone, Serialize)]
pub struct GridCheckReport {
    /// `(resolution, max ratio over the family)`.
    pub per_resolution: Vec<(u32, f64)>,
    /// Functions skipped for vanishing gradient norm.
    pub skipped: usize,
}

/// Direct Riemann-sum check of `||f - Pf||_{q,v} <= C ||grad f / g||_p` for
/// `r = 1` on a 2-d domain; `Pf` is the `v^q`-weighted mean over the root
/// Whitney cube, gradients are centered differences (one-sided along the
/// boundary).
pub fn grid_embedding_check(
    dom: &DomainSpec,
    gamma: &GammaSet,
    cfg: &ExponentConfig,
    resolutions: &[u32],
    seed: u64,
) -> Result<GridCheckReport> {
    if cfg.r != 1 || cfg.d != 2 || dom.d() != 2 {
        return Err(Error::InvalidParameter("grid check is for r = 1 on 2-d domains".into()));
    }
    if let Classification::Invalid(msg) = cfg.validate() {
        return Err(Error::InvalidConfig(msg));
    }
    let dec = crate::geometry::whitney_decompose(dom)?;
    let root_idx = (0..dec.cubes.len())
        .max_by_key(|&i| {
            (
                dec.dist_units[i],
                std::cmp::Reverse(dec.cubes[i].level),
                std::cmp::Reverse(dec.cubes[i].coords),
            )
        })
        .expect("cubes");
    let root = dec.cubes[root_idx];
    let n = dec.level;
    let scale = (1u64 << n) as f64;
    let root_lo = [root.lo(n)[0] as f64 / scale, root.lo(n)[1] as f64 / scale];
    let root_hi = [root.hi(n, 2)[0] as f64 / scale, root.hi(n, 2)[1] as f64 / scale];

    let family = grid_family(seed);
    let mut per_resolution = Vec::new();
    let mut skipped = 0usize;
    for &res in resolutions {
        let r = res as usize;
        let h = 1.0 / res as f64;
        let pts: Vec<(usize, usize)> =
            (0..r).flat_map(|iy| (0..r).map(move |ix| (ix, iy))).collect();
        let dom_side = dom.side();
        let inside: Vec<bool> = pts
            .iter()
            .map(|&(ix, iy)| {
                let cx = (((ix as f64 + 0.5) * h) * dom_side as f64) as usize;
                let cy = (((iy as f64 + 0.5) * h) * dom_side as f64) as usize;
                dom.filled([cx.min(dom_side - 1), cy.min(dom_side - 1), 0])
            })
            .collect();
        let dists: Vec<f64> = par_map(&pts, |&(ix, iy)| {
            gamma.dist_f64([(ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h, 0.0])
        });

        let mut max_ratio = 0.0f64;
        for f in &family {
            let vals: Vec<f64> = pts
                .iter()
                .map(|&(ix, iy)| f.eval([(ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h]))
                .collect();
            let at = |ix: isize, iy: isize| -> Option<f64> {
                if ix < 0 || iy < 0 || ix >= r as isize || iy >= r as isize {
                    return None;
                }
                let idx = iy as usize * r + ix as usize;
                inside[idx].then(|| vals[idx])
            };
            // Projection: v^q-weighted mean over the root cube.
            let mut proj_num = 0.0f64;
            let mut proj_den = 0.0f64;
            for (pi, &(ix, iy)) in pts.iter().enumerate() {
                if !inside[pi] {
                    continue;
                }
                let x = [(ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h];
                if x[0] >= root_lo[0]
                    && x[0] <= root_hi[0]
                    && x[1] >= root_lo[1]
                    && x[1] <= root_hi[1]
                {
                    let vw = cfg.phi_v_at(dists[pi]).powf(cfg.q);
                    proj_num += vals[pi] * vw;
                    proj_den += vw;
                }
            }
            let pf = proj_num / proj_den;

            let mut num_q = 0.0f64;
            let mut den_p = 0.0f64;
            let mut den_max = 0.0f64;
            for (pi, &(ix, iy)) in pts.iter().enumerate() {
                if !inside[pi] {
                    continue;
                }
                let t = dists[pi];
                let center = vals[pi];
                let (ix, iy) = (ix as isize, iy as isize);
                let diff = |m: Option<f64>, p: Option<f64>| -> f64 {
                    match (m, p) {
                        (Some(a), Some(b)) => (b - a) / (2.0 * h),
                        (Some(a), None) => (center - a) / h,
                        (None, Some(b)) => (b - center) / h,
                        (None, None) => 0.0,
                    }
                };
                let gx = diff(at(ix - 1, iy), at(ix + 1, iy));
                let gy = diff(at(ix, iy - 1), at(ix, iy + 1));
                let grad_sup = gx.abs().max(gy.abs());
                num_q += (cfg.phi_v_at(t) * (center - pf).abs()).powf(cfg.q) * h * h;
                if cfg.p.is_finite() {
                    den_p += (grad_sup / cfg.phi_g_at(t)).powf(cfg.p) * h * h;
                } else {
                    den_max = den_max.max(grad_sup / cfg.phi_g_at(t));
                }
            }
            let num = num_q.powf(1.0 / cfg.q);
            let den = if cfg.p.is_finite() { den_p.powf(1.0 / cfg.p) } else { den_max };
            if den < 1e-12 {
                skipped += 1;
                continue;
            }
            max_ratio = max_ratio.max(num / den);
        }
        per_resolution.push((res, max_ratio));
    }
    Ok(GridCheckReport { per_resolution, skipped })
}

/// Whether the pack sits outside the admissible range in a way the closing
/// construction witnesses.
pub fn witness_applicable(cfg: &ExponentConfig) -> bool {
    let threshold = cfg.delta() - cfg.theta() * cfg.qp_gap();
    let beta = cfg.beta();
    if beta > threshold + 1e-12 {
        return true;
    }
    (beta - threshold).abs() <= 1e-12
        && cfg.alpha() < (1.0 - cfg.gamma()) * cfg.qp_gap() - 1e-12
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    /// `(nu, weighted q-norm of the normalized bump package)`.
    pub rows: Vec<(u32, f64)>,
    pub bumps_per_scale: Vec<usize>,
}

/// Bump functions on boundary-scale cubes, normalized so the gradient side
/// of the inequality is one; their weighted `q`-norms blow up exactly when
/// the pack is inadmissible. A single bump suffices for `p <= q`; for
/// `p > q` the whole scale layer is summed. Refuses admissible packs unless
/// `force` is set (the suite forces to confirm boundedness).
pub fn sharpness_witness(
    dt: &DomainTree,
    cfg: &ExponentConfig,
    nu_range: std::ops::RangeInclusive<u32>,
    k_hat: u32,
    force: bool,
) -> Result<WitnessReport> {
    if !witness_applicable(cfg) && !force {
        return Err(Error::AdmissibleConfig);
    }
    let d = cfg.d as f64;
    let inv_p = if cfg.p.is_finite() { 1.0 / cfg.p } else { 0.0 };
    let summed = cfg.qp_gap() > 0.0;
    let mut rows = Vec::new();
    let mut bumps_per_scale = Vec::new();
    for nu in nu_range {
        let mut cubes: Vec<usize> = dt
            .tree
            .vertices()
            .filter(|&v| dt.in_w_hat[v] && dt.k[v] >= nu && dt.k[v] <= nu + k_hat)
            .collect();
        cubes.sort_by_key(|&v| (dt.cubes[v].level, dt.cubes[v].coords));
        if cubes.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "no boundary-scale cubes at scale {nu}; deepen the decomposition"
            )));
        }
        if !summed {
            cubes.truncate(1);
        }
        let card = cubes.len();
        bumps_per_scale.push(card);
        let y = nu as f64;
        let log2_c = cfg.beta_g * y
            + cfg.psi_g.log2_at_dyadic(y)
            + y * (d * inv_p - cfg.r as f64)
            - inv_p * (card as f64).log2();
        let c_nu = log2_c.exp2();
        let masses: Vec<f64> = par_map(&cubes, |&v| bump_q_mass(dt, cfg, v));
        let total: f64 = masses.iter().sum();
        rows.push((nu, c_nu * total.powf(1.0 / cfg.q)));
    }
    Ok(WitnessReport { rows, bumps_per_scale })
}

/// Midpoint-rule integral of `(v(x) phi((x - z)/t))^q` over a cube, with the
/// product squared-cosine bump profile.
fn bump_q_mass(dt: &DomainTree, cfg: &ExponentConfig, v: usize) -> f64 {
    const K: usize = 8;
    let n = dt.level;
    let cube = &dt.cubes[v];
    let units = (1u64 << n) as f64;
    let side = cube.side_units(n) as f64 / units;
    let lo = cube.lo(n);
    let cell_vol = (side / K as f64).powi(dt.d as i32);
    let mut acc = 0.0f64;
    let mut idx = [0usize; 3];
    loop {
        let mut x = [0.0f64; 3];
        let mut phi = 1.0f64;
        for axis in 0..dt.d {
            let frac = (idx[axis] as f64 + 0.5) / K as f64;
            x[axis] = lo[axis] as f64 / units + frac * side;
            phi *= (std::f64::consts::PI * (frac - 0.5)).cos().powi(2);
        }
        let t = dt.gamma.dist_f64(x);
        acc += (cfg.phi_v_at(t) * phi).powf(cfg.q) * cell_vol;
        let mut axis = 0;
        loop {
            idx[axis] += 1;
            if idx[axis] < K {
                break;
            }
            idx[axis] = 0;
            axis += 1;
            if axis == dt.d {
                return acc;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        blocks_and_quotient, build_domain_tree, partition, whitney_decompose, GammaSpec,
        DEFAULT_C_CAL,
    };
    use approx::assert_relative_eq;

    fn interval_pipeline(n: u32) -> (DomainTree, Quotient) {
        let dom = DomainSpec::builtin("interval", n).unwrap();
        let dec = whitney_decompose(&dom).unwrap();
        let gamma = GammaSet::build(&GammaSpec::corner(1), 1, n).unwrap();
        let dt = build_domain_tree(&dec, gamma, DEFAULT_C_CAL).unwrap();
        let part = partition(&dt).unwrap();
        let quo = blocks_and_quotient(&dt, &part, part.s_bar).unwrap();
        (dt, quo)
    }

    #[test]
    fn predicted_constant_examples() {
        // j0 = 0 in the generic case gives exactly 1 for trivial refinement.
        let cfg = ExponentConfig::plain(1, 1, 2.0, 2.0, 0.0, 0.0, 0.0);
        assert_relative_eq!(predicted_constant(&cfg, 2, 0).unwrap(), 1.0);
        // beta - delta = -1 decays dyadically in m * j0.
        assert_relative_eq!(
            predicted_constant(&cfg, 2, 3).unwrap(),
            (-6.0f64).exp2(),
            max_relative = 1e-12
        );
        // Borderline: the prediction is the slow-power law.
        let mut cfg = ExponentConfig::plain(1, 1, 2.0, 2.0, 1.0, 0.0, 0.0);
        cfg.h.log_exponent = -0.5;
        cfg.psi_g.log_exponent = -0.4;
        assert_eq!(cfg.validate(), Classification::CaseB);
        assert_relative_eq!(
            predicted_constant(&cfg, 2, 4).unwrap(),
            4f64.powf(-0.4),
            max_relative = 1e-12
        );
    }

    #[test]
    fn interval_point_ratio_is_level_uniform() {
        let (_dt, quo) = interval_pipeline(10);
        let cfg = ExponentConfig::plain(1, 1, 2.0, 2.0, 0.0, 0.0, 0.0);
        let mut ratios = Vec::new();
        for j0 in 1..=4 {
            let rep = constant_bound(&quo, &cfg, j0, 128).unwrap();
            assert!(rep.measured > 0.0);
            ratios.push(rep.ratio);
        }
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min <= 4.0, "ratios {ratios:?}");
    }

    #[test]
    fn sweep_recovers_slope() {
        let (_dt, quo) = interval_pipeline(12);
        let cfg = ExponentConfig::plain(1, 1, 2.0, 2.0, 0.0, 0.0, 0.0);
        let sweep = scaling_sweep(&quo, &cfg, 1..=5, 128).unwrap();
        assert!(
            (sweep.fitted_slope - sweep.predicted_slope).abs() <= 0.15,
            "slope {} vs {}",
            sweep.fitted_slope,
            sweep.predicted_slope
        );
    }

    #[test]
    fn witness_guard_and_growth() {
        let (dt, _quo) = interval_pipeline(10);
        let admissible = ExponentConfig::plain(1, 1, 2.0, 2.0, 0.5, 0.0, 0.0);
        assert!(matches!(
            sharpness_witness(&dt, &admissible, 4..=6, 1, false),
            Err(Error::AdmissibleConfig)
        ));
        let inadmissible = ExponentConfig::plain(1, 1, 2.0, 2.0, 1.5, 0.0, 0.0);
        let rep = sharpness_witness(&dt, &inadmissible, 3..=6, 1, false).unwrap();
        assert_eq!(rep.rows.len(), 4);
        // beta - delta = +0.5: consecutive ratios approach sqrt 2.
        for w in rep.rows.windows(2) {
            let step = w[1].1 / w[0].1;
            assert!(
                (step - 2f64.sqrt()).abs() / 2f64.sqrt() <= 0.2,
                "step {step}"
            );
        }
    }

    #[test]
    fn grid_check_stable_under_refinement() {
        let dom = DomainSpec::builtin("square", 5).unwrap();
        let gamma = GammaSet::build(&GammaSpec::corner(2), 2, 5).unwrap();
        let cfg = ExponentConfig::plain(2, 1, 2.0, 2.0, 0.0, 0.0, 0.0);
        let rep = grid_embedding_check(&dom, &gamma, &cfg, &[32, 64], 0).unwrap();
        // The constant is skipped at each resolution; the rest are finite.
        assert_eq!(rep.skipped, 2);
        let r32 = rep.per_resolution[0].1;
        let r64 = rep.per_resolution[1].1;
        assert!(r64 <= 1.15 * r32, "ratios {r32} -> {r64}");
    }
}
