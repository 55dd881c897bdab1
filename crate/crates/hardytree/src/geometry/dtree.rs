//! The domain tree: a face-consistent spanning tree over the Whitney cubes,
//! annotated with cube levels, boundary-generator scales, matched-scale
//! flags, the partition into constant-scale blocks, and the quotient tree of
//! distance bands.

use crate::error::{Error, Result};
use crate::par::par_map_idx;
use crate::tree::RootedTree;
use serde::Serialize;
use std::collections::VecDeque;

use super::gamma::GammaSet;
use super::whitney::{DyadicCube, WhitneyDecomposition};

/// Default calibration constant of the matched-scale test
/// `m <= k + 1 + log2(c_cal)`; 4 puts every built-in root in the set.
pub const DEFAULT_C_CAL: f64 = 4.0;

#[derive(Debug, Clone)]
pub struct DomainTree {
    pub d: usize,
    /// Grid resolution.
    pub level: u32,
    pub tree: RootedTree,
    /// `F`: vertex to cube, bijective.
    pub cubes: Vec<DyadicCube>,
    /// Full face-adjacency lists (the tree is a BFS spanning tree of this).
    pub adjacency: Vec<Vec<usize>>,
    /// Exact distance to the domain boundary in grid units.
    pub dist_boundary_units: Vec<i64>,
    /// Scale index per vertex: `2^{-k} <= dist(F(v), Gamma) < 2^{-k+1}`.
    pub k: Vec<u32>,
    pub in_w_hat: Vec<bool>,
    pub dist_gamma: Vec<f64>,
    pub gamma: GammaSet,
    pub c_cal: f64,
}

impl DomainTree {
    pub fn m(&self, v: usize) -> u32 {
        self.cubes[v].level
    }

    /// Largest sampled distance to the generator over the cube (corners and
    /// center).
    pub fn sampled_max_dist(&self, v: usize) -> f64 {
        let cube = &self.cubes[v];
        let lo = cube.lo(self.level);
        let hi = cube.hi(self.level, self.d);
        let mut best: f64 =
            self.gamma.dist_to_grid_point(cube.center(self.level, self.d), self.level + 1);
        let mut corner = [0i64; 3];
        for bits in 0..(1u32 << self.d) {
            for axis in 0..self.d {
                corner[axis] = if bits >> axis & 1 == 1 { hi[axis] } else { lo[axis] };
            }
            best = best.max(self.gamma.dist_to_grid_point(corner, self.level));
        }
        best
    }
}

pub fn build_domain_tree(
    dec: &WhitneyDecomposition,
    gamma: GammaSet,
    c_cal: f64,
) -> Result<DomainTree> {
    let n = dec.level;
    let d = dec.d;
    // Root: the deepest-inside cube; ties prefer coarse level, then lex.
    let root = (0..dec.cubes.len())
        .max_by_key(|&i| {
            (
                dec.dist_units[i],
                std::cmp::Reverse(dec.cubes[i].level),
                std::cmp::Reverse(dec.cubes[i].coords),
            )
        })
        .expect("non-empty decomposition");

    // BFS spanning tree over the face-adjacency graph.
    let mut parent = vec![usize::MAX; dec.cubes.len()];
    let mut order = Vec::with_capacity(dec.cubes.len());
    let mut seen = vec![false; dec.cubes.len()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &dec.adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let edges: Vec<(usize, usize)> = (0..dec.cubes.len())
        .filter(|&v| v != root)
        .map(|v| (parent[v], v))
        .collect();
    let tree = RootedTree::build(&edges, root)?;

    // Exact generator distances and scale indices, in parallel.
    let dists: Vec<(i128, i128)> = par_map_idx(dec.cubes.len(), |v| {
        let cube = &dec.cubes[v];
        gamma.dist_to_grid_box(cube.lo(n), cube.hi(n, d), n)
    });
    let mut k = Vec::with_capacity(dists.len());
    let mut dist_gamma = Vec::with_capacity(dists.len());
    for &(num, den) in &dists {
        k.push(GammaSet::scale_index(num, den)?);
        dist_gamma.push(num as f64 / den as f64);
    }
    let log_c = c_cal.log2();
    let in_w_hat: Vec<bool> = (0..dec.cubes.len())
        .map(|v| (dec.cubes[v].level as f64) <= k[v] as f64 + 1.0 + log_c + 1e-9)
        .collect();
    if !in_w_hat[root] {
        return Err(Error::InvalidConfig(format!(
            "root cube (level {}, scale {}) is not in the matched-scale set; raise c_cal",
            dec.cubes[root].level, k[root]
        )));
    }
    Ok(DomainTree {
        d,
        level: n,
        tree,
        cubes: dec.cubes.clone(),
        adjacency: dec.adjacency.clone(),
        dist_boundary_units: dec.dist_units.clone(),
        k,
        in_w_hat,
        dist_gamma,
        gamma,
        c_cal,
    })
}

/// One block of the partition: a maximal connected piece at a fixed
/// generator scale.
#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub anchor: usize,
    pub nu: u32,
    pub vertices: Vec<usize>,
    /// Block containing the anchor's tree parent.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Partition {
    pub blocks: Vec<Block>,
    pub block_of: Vec<usize>,
    /// Distinct block scales, increasing; the rank of a block's scale is its
    /// scale index.
    pub nu_values: Vec<u32>,
    /// Largest scale jump across the block-parent relation (at least 1).
    pub s_bar: u32,
}

impl Partition {
    pub fn scale_rank(&self, nu: u32) -> usize {
        self.nu_values.binary_search(&nu).expect("scale present")
    }
}

/// Splits the tree below each matched-scale vertex whose scale strictly
/// exceeds the scale of the enclosing block; everything else joins its
/// parent's block.
pub fn partition(dt: &DomainTree) -> Result<Partition> {
    let root = dt.tree.root();
    let mut block_of = vec![usize::MAX; dt.tree.len()];
    let mut blocks: Vec<Block> = vec![Block {
        anchor: root,
        nu: dt.k[root],
        vertices: Vec::new(),
        parent: None,
    }];
    block_of[root] = 0;
    // DFS preorder; children inherit the block unless they start one.
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        blocks[block_of[v]].vertices.push(v);
        for &c in dt.tree.children(v) {
            let cur = block_of[v];
            if dt.in_w_hat[c] && dt.k[c] > blocks[cur].nu {
                block_of[c] = blocks.len();
                blocks.push(Block {
                    anchor: c,
                    nu: dt.k[c],
                    vertices: Vec::new(),
                    parent: Some(cur),
                });
            } else {
                block_of[c] = cur;
            }
            stack.push(c);
        }
    }
    let mut nu_values: Vec<u32> = blocks.iter().map(|b| b.nu).collect();
    nu_values.sort_unstable();
    nu_values.dedup();
    let s_bar = blocks
        .iter()
        .filter_map(|b| b.parent.map(|p| b.nu - blocks[p].nu))
        .max()
        .unwrap_or(1);
    Ok(Partition { blocks, block_of, nu_values, s_bar })
}

/// Per-block `[min, max]` of `dist(x, Gamma) * 2^nu` with exact minima (cube
/// distances) and corner/center-sampled maxima.
pub fn block_distance_ratios(dt: &DomainTree, part: &Partition) -> Vec<(f64, f64)> {
    part.blocks
        .iter()
        .map(|b| {
            let scale = (b.nu as f64).exp2();
            let lo = b
                .vertices
                .iter()
                .map(|&v| dt.dist_gamma[v])
                .fold(f64::INFINITY, f64::min);
            let hi = b
                .vertices
                .iter()
                .map(|&v| dt.sampled_max_dist(v))
                .fold(0.0f64, f64::max);
            (lo * scale, hi * scale)
        })
        .collect()
}

/// The quotient tree: connected components of same-band block unions, one
/// vertex per component, bands advancing by exactly one along edges.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub tree: RootedTree,
    pub band: Vec<u32>,
    pub anchor: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    pub m: u32,
}

impl Quotient {
    /// Vertices of the quotient at band `j`.
    pub fn vertices_at_band(&self, j: u32) -> Vec<usize> {
        (0..self.tree.len()).filter(|&v| self.band[v] == j).collect()
    }
}

pub fn blocks_and_quotient(dt: &DomainTree, part: &Partition, m: u32) -> Result<Quotient> {
    if m == 0 || m % part.s_bar != 0 {
        return Err(Error::BandWidthNotMultiple { m, s_bar: part.s_bar });
    }
    for b in &part.blocks {
        if b.nu == 0 {
            return Err(Error::BlockScaleUnderflow(b.nu));
        }
    }
    let band_of_block: Vec<u32> = part.blocks.iter().map(|b| (b.nu - 1) / m).collect();

    // Union same-band blocks across the block-parent relation.
    let mut uf: Vec<usize> = (0..part.blocks.len()).collect();
    fn find(uf: &mut Vec<usize>, mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for (i, b) in part.blocks.iter().enumerate() {
        if let Some(p) = b.parent {
            if band_of_block[i] == band_of_block[p] {
                let (a, b) = (find(&mut uf, i), find(&mut uf, p));
                uf[a] = b;
            }
        }
    }
    // Component ids in (band, anchor) order for determinism.
    let mut reps: Vec<usize> = (0..part.blocks.len())
        .filter(|&i| find(&mut uf, i) == i)
        .collect();
    let comp_anchor = |rep: usize, uf: &mut Vec<usize>| -> usize {
        // The unique member block whose parent lies outside the component.
        let mut anchors: Vec<usize> = Vec::new();
        for i in 0..part.blocks.len() {
            if find(uf, i) == rep {
                match part.blocks[i].parent {
                    None => anchors.push(part.blocks[i].anchor),
                    Some(p) if find(uf, p) != rep => anchors.push(part.blocks[i].anchor),
                    _ => {}
                }
            }
        }
        debug_assert_eq!(anchors.len(), 1, "component has one minimal vertex");
        anchors[0]
    };
    let mut rep_info: Vec<(u32, usize, usize)> = reps
        .iter()
        .map(|&r| (band_of_block[r], comp_anchor(r, &mut uf), r))
        .collect();
    rep_info.sort_unstable();
    reps = rep_info.iter().map(|&(_, _, r)| r).collect();
    let mut comp_of_rep = std::collections::HashMap::new();
    for (idx, &r) in reps.iter().enumerate() {
        comp_of_rep.insert(r, idx);
    }

    let band: Vec<u32> = rep_info.iter().map(|&(j, _, _)| j).collect();
    let anchor: Vec<usize> = rep_info.iter().map(|&(_, a, _)| a).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); reps.len()];
    for i in 0..part.blocks.len() {
        let comp = comp_of_rep[&find(&mut uf, i)];
        members[comp].extend_from_slice(&part.blocks[i].vertices);
    }
    for ms in &mut members {
        ms.sort_unstable();
    }

    // Quotient edges through anchors; bands must advance by exactly one.
    let mut edges = Vec::new();
    let mut root_comp = None;
    for (comp, &a) in anchor.iter().enumerate() {
        match dt.tree.parent(a) {
            None => root_comp = Some(comp),
            Some(pv) => {
                let pcomp = comp_of_rep[&find(&mut uf, part.block_of[pv])];
                if band[comp] != band[pcomp] + 1 {
                    return Err(Error::Internal(format!(
                        "band advance {} -> {} violates the one-step law",
                        band[pcomp], band[comp]
                    )));
                }
                edges.push((pcomp, comp));
            }
        }
    }
    let root_comp = root_comp.ok_or_else(|| Error::Internal("quotient lost its root".into()))?;
    let tree = RootedTree::build(&edges, root_comp)?;
    Ok(Quotient { tree, band, anchor, members, m })
}

/// Measured scale-counting laws.
#[derive(Debug, Clone, Serialize)]
pub struct CountingReport {
    pub nu0: u32,
    /// Max over matched-scale vertices and scales of
    /// `card W_nu(xi) * h(2^-nu) / h(2^-nu0(xi))`.
    pub w_upper_max: f64,
    /// Smallest window making the root-based windowed counts positive.
    pub k_hat: u32,
    /// `(nu, windowed ratio)` for the root.
    pub windowed: Vec<(u32, f64)>,
    /// `(j, l, max over t of card I^l_{j,t} * h(2^-m(j+l)) / h(2^-mj))`.
    pub lemma4: Vec<(u32, u32, f64)>,
}

pub fn counting_checks(dt: &DomainTree, quo: &Quotient) -> CountingReport {
    let root = dt.tree.root();
    let nu_max = dt
        .tree
        .vertices()
        .filter(|&v| dt.in_w_hat[v])
        .map(|v| dt.k[v])
        .max()
        .unwrap_or(0);
    // Per-vertex subtree counts of matched-scale vertices by scale.
    let width = nu_max as usize + 1;
    let mut counts: Vec<Vec<u32>> = vec![Vec::new(); dt.tree.len()];
    let order = dt.tree.subtree(root);
    for &v in order.iter().rev() {
        let mut acc = vec![0u32; width];
        if dt.in_w_hat[v] {
            acc[dt.k[v] as usize] += 1;
        }
        for &c in dt.tree.children(v) {
            for (a, b) in acc.iter_mut().zip(&counts[c]) {
                *a += b;
            }
        }
        counts[v] = acc;
    }

    let mut w_upper_max = 0.0f64;
    for v in dt.tree.vertices().filter(|&v| dt.in_w_hat[v]) {
        let nu0 = dt.k[v];
        for nu in nu0..=nu_max {
            let c = counts[v][nu as usize] as f64;
            if c > 0.0 {
                w_upper_max = w_upper_max.max(c * dt.gamma.h_ratio(nu, nu0));
            }
        }
    }

    let nu0 = dt.k[root];
    // Counts at scale nu are complete only while the decomposition can host
    // cubes up to level nu + 1 + log2(c_cal); beyond that the finite
    // resolution truncates the matched-scale set.
    let max_m = dt.tree.vertices().map(|v| dt.m(v)).max().unwrap_or(0);
    let nu_hi = ((max_m as f64 - 1.0 - dt.c_cal.log2()).floor().max(nu0 as f64)) as u32;
    let nu_hi = nu_hi.min(nu_max);
    let root_counts = &counts[root];
    let mut k_hat = 0;
    let mut windowed = Vec::new();
    for k in 0..=6u32 {
        if nu0 + k > nu_hi {
            break;
        }
        let vals: Vec<(u32, f64)> = (nu0..=nu_hi - k)
            .map(|nu| {
                let sum: u32 = (nu..=(nu + k).min(nu_hi))
                    .map(|l| root_counts[l as usize])
                    .sum();
                (nu, sum as f64 * dt.gamma.h_ratio(nu, nu0))
            })
            .collect();
        if vals.is_empty() || vals.iter().any(|&(_, r)| r <= 0.0) {
            continue;
        }
        let hi = vals.iter().map(|v| v.1).fold(f64::MIN, f64::max);
        let lo = vals.iter().map(|v| v.1).fold(f64::MAX, f64::min);
        if windowed.is_empty() {
            k_hat = k;
            windowed = vals.clone();
        }
        if hi / lo <= 8.0 {
            k_hat = k;
            windowed = vals;
            break;
        }
    }

    let mut lemma4 = Vec::new();
    let max_band = quo.band.iter().copied().max().unwrap_or(0);
    let min_band = quo.band.iter().copied().min().unwrap_or(0);
    for j in min_band..max_band {
        for l in 1..=(max_band - j) {
            let mut worst = 0.0f64;
            for t in quo.vertices_at_band(j) {
                let count = quo.tree.level_set(t, l as usize).len() as f64;
                let ratio = count * dt.gamma.h_ratio(quo.m * (j + l), quo.m * j);
                worst = worst.max(ratio);
            }
            if worst > 0.0 {
                lemma4.push((j, l, worst));
            }
        }
    }
    CountingReport { nu0, w_upper_max, k_hat, windowed, lemma4 }
}

/// Measured constants of the scale annotation.
#[derive(Debug, Clone, Serialize)]
pub struct AnnotationChecks {
    /// Max of `k - m` over vertices (the paper bounds it by a dimensional
    /// constant).
    pub vartheta: i64,
    /// Max over vertices and sampled points of `dist(x, Gamma) * 2^k`; the
    /// lower counterpart is exactly 1 by the scale bracket.
    pub dist_scale_max: f64,
    /// For vertices outside the matched-scale set: range of
    /// `dist(x, Gamma) * 2^k` sampled over the whole subtree region.
    pub off_scale_range: (f64, f64),
}

pub fn annotation_checks(dt: &DomainTree) -> AnnotationChecks {
    let mut vartheta = i64::MIN;
    let mut dist_scale_max = 0.0f64;
    for v in dt.tree.vertices() {
        vartheta = vartheta.max(dt.k[v] as i64 - dt.m(v) as i64);
        dist_scale_max = dist_scale_max.max(dt.sampled_max_dist(v) * (dt.k[v] as f64).exp2());
    }
    // Subtree min of exact distances and max of sampled distances.
    let order = dt.tree.subtree(dt.tree.root());
    let mut sub_min = vec![f64::INFINITY; dt.tree.len()];
    let mut sub_max = vec![0.0f64; dt.tree.len()];
    for &v in order.iter().rev() {
        let mut lo = dt.dist_gamma[v];
        let mut hi = dt.sampled_max_dist(v);
        for &c in dt.tree.children(v) {
            lo = lo.min(sub_min[c]);
            hi = hi.max(sub_max[c]);
        }
        sub_min[v] = lo;
        sub_max[v] = hi;
    }
    let mut off_lo = f64::INFINITY;
    let mut off_hi = 0.0f64;
    for v in dt.tree.vertices().filter(|&v| !dt.in_w_hat[v]) {
        let scale = (dt.k[v] as f64).exp2();
        off_lo = off_lo.min(sub_min[v] * scale);
        off_hi = off_hi.max(sub_max[v] * scale);
    }
    if off_lo > off_hi {
        // No off-scale vertices at all.
        off_lo = 1.0;
        off_hi = 1.0;
    }
    AnnotationChecks { vartheta, dist_scale_max, off_scale_range: (off_lo, off_hi) }
}

#[derive(Serialize)]
struct DomainTreeVertexJson {
    id: usize,
    parent: Option<usize>,
    cube: DyadicCube,
    m: u32,
    k: u32,
    in_w_hat: bool,
    dist_gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    block: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    band: Option<u32>,
}

#[derive(Serialize)]
struct DomainTreeJson {
    schema: u32,
    d: usize,
    level: u32,
    root: usize,
    s_bar: Option<u32>,
    vertices: Vec<DomainTreeVertexJson>,
}

pub fn domain_tree_json(
    dt: &DomainTree,
    part: Option<&Partition>,
    quo: Option<&Quotient>,
) -> String {
    let mut band_of_vertex: Vec<Option<u32>> = vec![None; dt.tree.len()];
    if let Some(q) = quo {
        for (comp, ms) in q.members.iter().enumerate() {
            for &v in ms {
                band_of_vertex[v] = Some(q.band[comp]);
            }
        }
    }
    let vertices = dt
        .tree
        .vertices()
        .map(|v| DomainTreeVertexJson {
            id: v,
            parent: dt.tree.parent(v),
            cube: dt.cubes[v],
            m: dt.m(v),
            k: dt.k[v],
            in_w_hat: dt.in_w_hat[v],
            dist_gamma: dt.dist_gamma[v],
            block: part.map(|p| p.block_of[v]),
            nu: part.map(|p| p.blocks[p.block_of[v]].nu),
            band: band_of_vertex[v],
        })
        .collect();
    serde_json::to_string_pretty(&DomainTreeJson {
        schema: 1,
        d: dt.d,
        level: dt.level,
        root: dt.tree.root(),
        s_bar: part.map(|p| p.s_bar),
        vertices,
    })
    .expect("domain tree serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{whitney_decompose, DomainSpec, GammaSpec};

    fn interval_tree(n: u32) -> DomainTree {
        let dom = DomainSpec::builtin("interval", n).unwrap();
        let dec = whitney_decompose(&dom).unwrap();
        let gamma = GammaSet::build(&GammaSpec::corner(1), 1, n).unwrap();
        build_domain_tree(&dec, gamma, DEFAULT_C_CAL).unwrap()
    }

    #[test]
    fn interval_point_scales_increase_toward_generator() {
        let dt = interval_tree(8);
        // Sorted by position, k is non-increasing away from the origin.
        let mut by_position: Vec<usize> = dt.tree.vertices().collect();
        by_position.sort_by_key(|&v| dt.cubes[v].lo(8)[0]);
        let ks: Vec<u32> = by_position.iter().map(|&v| dt.k[v]).collect();
        for w in ks.windows(2) {
            assert!(w[0] >= w[1], "k must fall left to right: {ks:?}");
        }
        assert!(dt.in_w_hat[dt.tree.root()]);
    }

    #[test]
    fn both_endpoints_flag_everything() {
        // Gamma = both endpoints of the interval: every cube has k close to
        // m, so all vertices are matched-scale for c_cal = 4.
        let n = 7;
        let dom = DomainSpec::builtin("interval", n).unwrap();
        let dec = whitney_decompose(&dom).unwrap();
        let gamma = GammaSet {
            d: 1,
            den: 1,
            boxes: vec![([0, 0, 0], [0, 0, 0]), ([1, 0, 0], [1, 0, 0])],
            theta: 0.0,
            spec: GammaSpec::corner(1),
        };
        let dt = build_domain_tree(&dec, gamma, DEFAULT_C_CAL).unwrap();
        assert!(dt.tree.vertices().all(|v| dt.in_w_hat[v]));
    }

    #[test]
    fn single_cube_domain() {
        // A tiny square domain yielding one accepted cube.
        let dom = DomainSpec::builtin("square", 3).unwrap();
        let dec = whitney_decompose(&dom).unwrap();
        let gamma = GammaSet::build(&GammaSpec::corner(2), 2, 3).unwrap();
        let dt = build_domain_tree(&dec, gamma, DEFAULT_C_CAL).unwrap();
        assert_eq!(dt.tree.len(), dec.cubes.len());
        let part = partition(&dt).unwrap();
        let covered: usize = part.blocks.iter().map(|b| b.vertices.len()).sum();
        assert_eq!(covered, dt.tree.len());
    }

    #[test]
    fn partition_assertions() {
        let dt = interval_tree(8);
        let part = partition(&dt).unwrap();
        // Assertion 2: anchors are matched-scale vertices at their scale.
        for b in &part.blocks {
            assert!(dt.in_w_hat[b.anchor]);
            assert_eq!(dt.k[b.anchor], b.nu);
        }
        // Assertion 4: nested anchors have increasing scale ranks.
        for a in &part.blocks {
            for b in &part.blocks {
                if a.anchor != b.anchor && dt.tree.is_above_or_eq(b.anchor, a.anchor) {
                    assert!(part.scale_rank(a.nu) < part.scale_rank(b.nu));
                }
            }
        }
        // Partition covers every vertex exactly once.
        let mut seen = vec![false; dt.tree.len()];
        for bl in &part.blocks {
            for &v in &bl.vertices {
                assert!(!seen[v]);
                seen[v] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
        // Assertion 3: block regions live at their scale within a bounded
        // two-sided ratio.
        for (lo, hi) in block_distance_ratios(&dt, &part) {
            assert!(lo >= 1.0 - 1e-12, "lower ratio {lo}");
            assert!(hi <= 64.0, "upper ratio {hi}");
        }
    }

    #[test]
    fn s_bar_stable_under_refinement() {
        let s6 = partition(&interval_tree(6)).unwrap().s_bar;
        let s8 = partition(&interval_tree(8)).unwrap().s_bar;
        assert_eq!(s6, s8);
    }

    #[test]
    fn quotient_point_interval_is_path() {
        let dt = interval_tree(9);
        let part = partition(&dt).unwrap();
        let m = part.s_bar;
        let quo = blocks_and_quotient(&dt, &part, m).unwrap();
        // Point generator: each populated band holds a single component.
        let lo = quo.band.iter().copied().min().unwrap();
        let hi = quo.band.iter().copied().max().unwrap();
        for j in lo..=hi {
            assert_eq!(quo.vertices_at_band(j).len(), 1, "band {j}");
        }
        assert!(quo.tree.max_depth() >= 3);
    }

    #[test]
    fn quotient_rejects_non_multiple() {
        let dt = interval_tree(8);
        let part = partition(&dt).unwrap();
        assert!(matches!(
            blocks_and_quotient(&dt, &part, 0),
            Err(Error::BandWidthNotMultiple { .. })
        ));
        if part.s_bar > 1 {
            assert!(matches!(
                blocks_and_quotient(&dt, &part, part.s_bar + 1),
                Err(Error::BandWidthNotMultiple { .. })
            ));
        }
    }

    #[test]
    fn counting_point_generator_bounded() {
        let dt = interval_tree(9);
        let part = partition(&dt).unwrap();
        let quo = blocks_and_quotient(&dt, &part, part.s_bar).unwrap();
        let rep = counting_checks(&dt, &quo);
        // h == 1: matched-scale counts per scale stay bounded.
        assert!(rep.w_upper_max <= 8.0, "w ratio {}", rep.w_upper_max);
        for &(_, _, r) in &rep.lemma4 {
            assert!(r <= 8.0);
        }
    }

    #[test]
    fn annotation_constants_bounded() {
        let dt = interval_tree(8);
        let checks = annotation_checks(&dt);
        assert!(checks.vartheta <= 2);
        assert!(checks.dist_scale_max <= 8.0);
        let (lo, hi) = checks.off_scale_range;
        assert!(lo >= 0.5 && hi <= 16.0, "off-scale range {lo}..{hi}");
    }

    #[test]
    fn json_export_contains_annotations() {
        let dt = interval_tree(6);
        let part = partition(&dt).unwrap();
        let quo = blocks_and_quotient(&dt, &part, part.s_bar).unwrap();
        let text = domain_tree_json(&dt, Some(&part), Some(&quo));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema"], 1);
        assert!(v["vertices"][0]["cube"]["level"].is_u64());
        assert!(v["vertices"][0]["k"].is_u64());
    }
}
