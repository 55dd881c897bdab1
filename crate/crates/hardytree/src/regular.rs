//! Level-regular comparison trees and the symmetrization that transplants a
//! subtree into one while preserving the `S` and `Q` scalars up to bounded
//! factors.
//!
//! The regular tree branches `2^{psi*(j+1) - psi*(j)}` at absolute level `j`.
//! Symmetrization walks the levels carrying maximal vertices: while the
//! placed maxima pack into less than half of the level capacity it copies
//! the counts verbatim (placing lexicographically smallest fresh vertices),
//! and once the half-capacity test fails it saturates the level and stops.
//! All packing arithmetic is exact integer arithmetic on branching products.

use crate::error::{Error, Result};
use crate::tree::{RootedTree, SubtreeSelection};
use crate::weights::{LevelWeights, PsiStar};
use serde::{Deserialize, Serialize};

pub const REGULAR_TREE_CAP: u128 = 1 << 22;

/// Shape of a regular tree: the base absolute level and the branching factor
/// per depth step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularTreeSpec {
    pub j0: u32,
    pub branching: Vec<u64>,
}

impl RegularTreeSpec {
    /// Branching read off a `psi*` profile for a root at absolute level `j0`.
    pub fn from_psi_star(ps: &PsiStar, j0: u32, depth: u32) -> Result<Self> {
        let lo = j0 as usize;
        let hi = lo + depth as usize;
        if hi > ps.branching.len() {
            return Err(Error::InvalidParameter(format!(
                "psi* profile covers {} steps, need {}",
                ps.branching.len(),
                hi
            )));
        }
        Ok(Self { j0, branching: ps.branching[lo..hi].to_vec() })
    }

    pub fn depth(&self) -> usize {
        self.branching.len()
    }

    /// Number of vertices at depth `l`, exactly.
    pub fn level_size(&self, l: usize) -> Result<u128> {
        let mut prod: u128 = 1;
        for &n in &self.branching[..l] {
            prod = prod
                .checked_mul(n as u128)
                .ok_or(Error::RegularTreeCap(u128::MAX, REGULAR_TREE_CAP))?;
        }
        Ok(prod)
    }

    pub fn total_size(&self) -> Result<u128> {
        let mut total: u128 = 0;
        for l in 0..=self.depth() {
            total = total
                .checked_add(self.level_size(l)?)
                .ok_or(Error::RegularTreeCap(u128::MAX, REGULAR_TREE_CAP))?;
        }
        Ok(total)
    }
}

/// Builds the regular tree with level-major vertex labels: the root is 0,
/// then level 1 left to right, and so on.
pub fn build_regular(spec: &RegularTreeSpec) -> Result<RootedTree> {
    let total = spec.total_size()?;
    if total > REGULAR_TREE_CAP {
        return Err(Error::RegularTreeCap(total, REGULAR_TREE_CAP));
    }
    let mut edges = Vec::with_capacity(total as usize - 1);
    let mut level_start = 0usize;
    let mut level_len = 1usize;
    let mut next = 1usize;
    for &n in &spec.branching {
        for parent in level_start..level_start + level_len {
            for _ in 0..n {
                edges.push((parent, next));
                next += 1;
            }
        }
        level_start += level_len;
        level_len *= n as usize;
    }
    RootedTree::build(&edges, 0)
}

/// Result of transplanting a selection into the regular tree.
#[derive(Debug, Clone, Serialize)]
pub struct Symmetrized {
    pub spec: RegularTreeSpec,
    /// Maxima placed in the regular tree, grouped by absolute level.
    pub placed: Vec<(u32, Vec<usize>)>,
    /// Vertex set of the transplanted subtree (union of root segments).
    pub vertices: Vec<usize>,
    /// True when the construction hit the half-capacity test and saturated a
    /// level.
    pub saturated: bool,
}

impl Symmetrized {
    pub fn maxima_counts(&self) -> Vec<(u32, usize)> {
        self.placed.iter().map(|(j, v)| (*j, v.len())).collect()
    }
}

/// Maxima of `d` in its host, grouped by absolute level (host depth plus
/// `j0 - depth(base)` so the base sits at level `j0`).
pub fn maxima_by_level(
    host: &RootedTree,
    d: &SubtreeSelection,
    j0: u32,
) -> Vec<(u32, usize)> {
    let base_depth = host.depth(d.base);
    let mut counts = std::collections::BTreeMap::new();
    for v in d.maxima(host) {
        let level = j0 + (host.depth(v) - base_depth) as u32;
        *counts.entry(level).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}

/// Transplants `d` (rooted at absolute level `j0` in its host) into the
/// regular tree described by `ps`, preserving per-level maxima counts until
/// a level saturates.
pub fn symmetrize(
    host: &RootedTree,
    d: &SubtreeSelection,
    j0: u32,
    ps: &PsiStar,
) -> Result<Symmetrized> {
    let levels = maxima_by_level(host, d, j0);
    let deepest = levels.last().map(|&(j, _)| j).unwrap_or(j0);
    let spec = RegularTreeSpec::from_psi_star(ps, j0, deepest - j0)?;
    let regular = build_regular(&spec)?;

    // Level-major labeling makes levels contiguous id ranges.
    let mut level_ranges = Vec::new();
    let mut start = 0usize;
    let mut len = 1usize;
    for l in 0..=spec.depth() {
        level_ranges.push(start..start + len);
        start += len;
        if l < spec.depth() {
            len *= spec.branching[l] as usize;
        }
    }

    let mut blocked_flag = vec![false; regular.len()];
    let mut placed: Vec<(u32, Vec<usize>)> = Vec::new();
    let mut saturated = false;

    for (t, &(j_t, c_t)) in levels.iter().enumerate() {
        let rel = (j_t - j0) as usize;
        let cap = ps.pow2_between(j0 as usize, j_t as usize)?;
        // Exact count blocked by earlier placements.
        let mut blocked: u128 = 0;
        for &(j_tau, ref placed_tau) in &placed {
            let span = ps.pow2_between(j_tau as usize, j_t as usize)?;
            blocked += placed_tau.len() as u128 * span;
        }
        let unblocked: Vec<usize> = level_ranges[rel]
            .clone()
            .filter(|&v| !is_blocked(&regular, &mut blocked_flag, v))
            .collect();
        if unblocked.len() as u128 != cap - blocked {
            return Err(Error::Internal(format!(
                "placement accounting mismatch at level {j_t}: {} free vs {}",
                unblocked.len(),
                cap - blocked
            )));
        }
        if 2 * (c_t as u128 + blocked) < cap {
            // Fresh placement: counts copied verbatim, lexicographically
            // smallest free vertices.
            if unblocked.len() < c_t {
                return Err(Error::Internal(format!(
                    "cannot place {c_t} maxima at level {j_t}"
                )));
            }
            let chosen: Vec<usize> = unblocked[..c_t].to_vec();
            for &v in &chosen {
                blocked_flag[v] = true;
            }
            placed.push((j_t, chosen));
        } else {
            for &v in &unblocked {
                blocked_flag[v] = true;
            }
            placed.push((j_t, unblocked));
            saturated = true;
            break;
        }
        let _ = t;
    }

    // Disjointness: placements at distinct levels are incomparable.
    for (i, (_, vs)) in placed.iter().enumerate() {
        for (_, ws) in placed.iter().skip(i + 1) {
            for &w in ws {
                for &v in vs {
                    if regular.is_above_or_eq(w, v) {
                        return Err(Error::Internal(
                            "placed maximal vertex descends from an earlier placement".into(),
                        ));
                    }
                }
            }
        }
    }

    let mut members = std::collections::BTreeSet::new();
    for (_, vs) in &placed {
        for &v in vs {
            for s in regular.segment(0, v).expect("root segment exists") {
                members.insert(s);
            }
        }
    }
    Ok(Symmetrized {
        spec,
        placed,
        vertices: members.into_iter().collect(),
        saturated,
    })
}

fn is_blocked(tree: &RootedTree, flags: &mut [bool], v: usize) -> bool {
    // A vertex is blocked when any root-path ancestor carries a placement
    // flag (descendant cones of placed maxima are off limits).
    let mut cur = v;
    loop {
        if flags[cur] {
            return true;
        }
        match tree.parent(cur) {
            Some(p) => cur = p,
            None => return false,
        }
    }
}

/// `S` and `Q` from per-level maxima counts; both sides of the comparison
/// use this one loop so equal counts give bit-equal scalars.
pub fn scalars_from_counts(
    counts: &[(u32, usize)],
    lw: &LevelWeights,
    p: f64,
    q: f64,
) -> (f64, f64) {
    let mut s_inv = 0.0f64;
    let mut q_pow = 0.0f64;
    for &(level, c) in counts {
        s_inv += c as f64 * lw.u[level as usize].powf(-p);
        q_pow += c as f64 * lw.w[level as usize].powf(q);
    }
    (s_inv.powf(-1.0 / p), q_pow.powf(1.0 / q))
}

/// `(S_D / S_Dhat, Q_D / Q_Dhat)` under shared level weights.
pub fn comparison_check(
    host: &RootedTree,
    d: &SubtreeSelection,
    j0: u32,
    sym: &Symmetrized,
    lw: &LevelWeights,
    p: f64,
    q: f64,
) -> (f64, f64) {
    let host_counts = maxima_by_level(host, d, j0);
    let (s_d, q_d) = scalars_from_counts(&host_counts, lw, p, q);
    let (s_hat, q_hat) = scalars_from_counts(&sym.maxima_counts(), lw, p, q);
    (s_d / s_hat, q_d / q_hat)
}
