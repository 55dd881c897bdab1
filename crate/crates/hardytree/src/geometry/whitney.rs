//! Whitney decomposition over the dyadic grid.
//!
//! A dyadic cube is accepted at the coarsest level where it lies inside the
//! domain and its sup-norm distance to the domain boundary is at least twice
//! its side; otherwise it splits. Cells that never qualify at the finest
//! level form the reported uncovered boundary layer. Distances come from a
//! Chebyshev multi-source BFS on the cell grid, so every acceptance decision
//! is exact integer arithmetic.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

use super::domain::DomainSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicCube {
    pub level: u32,
    pub coords: [u32; 3],
}

impl DyadicCube {
    /// Lower corner in units of `2^{-n}`.
    pub fn lo(&self, n: u32) -> [i64; 3] {
        let s = 1i64 << (n - self.level);
        [self.coords[0] as i64 * s, self.coords[1] as i64 * s, self.coords[2] as i64 * s]
    }

    pub fn hi(&self, n: u32, d: usize) -> [i64; 3] {
        let mut hi = self.lo(n);
        let s = 1i64 << (n - self.level);
        for item in hi.iter_mut().take(d) {
            *item += s;
        }
        hi
    }

    /// Side in units of `2^{-n}`.
    pub fn side_units(&self, n: u32) -> i64 {
        1i64 << (n - self.level)
    }

    /// Center at scale `2^{-(n+1)}`.
    pub fn center(&self, n: u32, d: usize) -> [i64; 3] {
        let lo = self.lo(n);
        let s = self.side_units(n);
        let mut c = [0i64; 3];
        for axis in 0..d {
            c[axis] = 2 * lo[axis] + s;
        }
        c
    }
}

#[derive(Debug, Clone)]
pub struct WhitneyDecomposition {
    pub d: usize,
    pub level: u32,
    pub cubes: Vec<DyadicCube>,
    /// Exact `dist(cube, boundary)` in units of `2^{-level}`.
    pub dist_units: Vec<i64>,
    /// Face-adjacency lists over `cubes`.
    pub adjacency: Vec<Vec<usize>>,
    /// Domain cells left uncovered at the finest level.
    pub uncovered_cells: usize,
}

impl WhitneyDecomposition {
    pub fn uncovered_volume(&self) -> f64 {
        self.uncovered_cells as f64 / (1u64 << (self.d as u32 * self.level)) as f64
    }

    /// `dist / side` per cube; the acceptance rule pins this to `[2, 6]`.
    pub fn dist_side_ratios(&self) -> Vec<f64> {
        self.cubes
            .iter()
            .zip(&self.dist_units)
            .map(|(c, &d)| d as f64 / c.side_units(self.level) as f64)
            .collect()
    }

    /// Exact level gap across each adjacency.
    pub fn max_neighbor_level_gap(&self) -> u32 {
        let mut gap = 0;
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs {
                gap = gap.max(self.cubes[i].level.abs_diff(self.cubes[j].level));
            }
        }
        gap
    }

    pub fn max_neighbor_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Chebyshev distance of every cell to the complement (non-domain cells and
/// the exterior of the unit box), via multi-source BFS over the full
/// neighborhood; `dist(cell closure, boundary) = bfs - 1` in cell units.
fn chebyshev_bfs(dom: &DomainSpec) -> Vec<u32> {
    let side = dom.side();
    let cells = dom.cell_count();
    let mut dist = vec![u32::MAX; cells];
    let mut queue = std::collections::VecDeque::new();
    for idx in 0..cells {
        if !dom.filled_index(idx) {
            dist[idx] = 0;
            queue.push_back(idx);
        } else {
            // Cells on the outer ring are BFS-adjacent to the exterior.
            let c = dom.coords(idx);
            if (0..dom.d()).any(|a| c[a] == 0 || c[a] == side - 1) {
                dist[idx] = 1;
                queue.push_back(idx);
            }
        }
    }
    let offsets: Vec<[isize; 3]> = neighborhood(dom.d());
    while let Some(idx) = queue.pop_front() {
        let c = dom.coords(idx);
        for off in &offsets {
            let mut nc = [0usize; 3];
            let mut ok = true;
            for a in 0..dom.d() {
                let x = c[a] as isize + off[a];
                if x < 0 || x as usize >= side {
                    ok = false;
                    break;
                }
                nc[a] = x as usize;
            }
            if !ok {
                continue;
            }
            let nidx = dom.index(nc);
            if dist[nidx] == u32::MAX {
                dist[nidx] = dist[idx] + 1;
                queue.push_back(nidx);
            }
        }
    }
    dist
}

fn neighborhood(d: usize) -> Vec<[isize; 3]> {
    let mut out = Vec::new();
    let range = |_| -1isize..=1;
    for dx in range(0) {
        for dy in if d >= 2 { -1..=1 } else { 0..=0 } {
            for dz in if d >= 3 { -1..=1 } else { 0..=0 } {
                if dx != 0 || dy != 0 || dz != 0 {
                    out.push([dx, dy, dz]);
                }
            }
        }
    }
    out
}

struct Pyramid {
    d: usize,
    n: u32,
    /// `min_bfs[m]` and `all_filled[m]` per level `m`, coarse to fine.
    min_bfs: Vec<Vec<u32>>,
    all_filled: Vec<Vec<bool>>,
}

impl Pyramid {
    fn index(d: usize, m: u32, coords: [u32; 3]) -> usize {
        let side = 1usize << m;
        let mut idx = 0;
        for axis in (0..d).rev() {
            idx = idx * side + coords[axis] as usize;
        }
        idx
    }

    fn build(dom: &DomainSpec, bfs: &[u32]) -> Self {
        let d = dom.d();
        let n = dom.level();
        let mut min_bfs = vec![Vec::new(); n as usize + 1];
        let mut all_filled = vec![Vec::new(); n as usize + 1];
        min_bfs[n as usize] = bfs.to_vec();
        all_filled[n as usize] = (0..dom.cell_count()).map(|i| dom.filled_index(i)).collect();
        for m in (0..n).rev() {
            let side = 1usize << m;
            let count = side.pow(d as u32);
            let mut mb = vec![u32::MAX; count];
            let mut af = vec![true; count];
            let child_side = 1usize << (m + 1);
            for idx in 0..child_side.pow(d as u32) {
                // Decompose the child index, halve coordinates.
                let mut rest = idx;
                let mut cc = [0u32; 3];
                for item in cc.iter_mut().take(d) {
                    *item = (rest % child_side) as u32;
                    rest /= child_side;
                }
                let pc = [cc[0] / 2, cc[1] / 2, cc[2] / 2];
                let pidx = Self::index(d, m, pc);
                mb[pidx] = mb[pidx].min(min_bfs[m as usize + 1][idx]);
                af[pidx] &= all_filled[m as usize + 1][idx];
            }
            min_bfs[m as usize] = mb;
            all_filled[m as usize] = af;
        }
        Self { d, n, min_bfs, all_filled }
    }

    /// Acceptance rule: inside the domain with `dist >= 2 * side`.
    fn accepted(&self, cube: &DyadicCube) -> bool {
        let idx = Self::index(self.d, cube.level, cube.coords);
        if !self.all_filled[cube.level as usize][idx] {
            return false;
        }
        let min_bfs = self.min_bfs[cube.level as usize][idx];
        let dist_units = min_bfs as i64 - 1;
        dist_units >= 2 * cube.side_units(self.n)
    }

    fn dist_units(&self, cube: &DyadicCube) -> i64 {
        let idx = Self::index(self.d, cube.level, cube.coords);
        self.min_bfs[cube.level as usize][idx] as i64 - 1
    }
}

pub fn whitney_decompose(dom: &DomainSpec) -> Result<WhitneyDecomposition> {
    let n = dom.level();
    let d = dom.d();
    let bfs = chebyshev_bfs(dom);
    let pyr = Pyramid::build(dom, &bfs);

    let mut cubes = Vec::new();
    let mut uncovered = 0usize;
    let mut stack = vec![DyadicCube { level: 0, coords: [0; 3] }];
    while let Some(cube) = stack.pop() {
        if pyr.accepted(&cube) {
            cubes.push(cube);
        } else if cube.level < n {
            // Children in reverse-lex order so the pop order is lex.
            let mut kids = Vec::with_capacity(1 << d);
            for bits in 0..(1u32 << d) {
                let mut cc = cube.coords;
                for (axis, item) in cc.iter_mut().enumerate().take(d) {
                    *item = *item * 2 + (bits >> axis & 1);
                }
                kids.push(DyadicCube { level: cube.level + 1, coords: cc });
            }
            kids.sort_by_key(|c| std::cmp::Reverse(c.coords));
            stack.extend(kids);
        } else if dom.filled(
            [cube.coords[0] as usize, cube.coords[1] as usize, cube.coords[2] as usize],
        ) {
            uncovered += 1;
        }
    }
    if cubes.is_empty() {
        return Err(Error::EmptyWhitney(n));
    }
    cubes.sort_by_key(|c| (c.level, c.coords));

    // Paint cells with cube owners: checks exact non-overlap and gives the
    // adjacency scan its lookups.
    let mut owner = vec![usize::MAX; dom.cell_count()];
    for (ci, cube) in cubes.iter().enumerate() {
        let lo = cube.lo(n);
        let s = cube.side_units(n);
        let mut cursor = [0i64; 3];
        paint(dom, &mut owner, ci, lo, s, &mut cursor, 0)?;
    }

    let adjacency = face_adjacency(dom, &cubes, &owner);
    let dec = WhitneyDecomposition {
        d,
        level: n,
        dist_units: cubes.iter().map(|c| pyr.dist_units(c)).collect(),
        cubes,
        adjacency,
        uncovered_cells: uncovered,
    };

    // Connectivity of the accepted family.
    let mut seen = vec![false; dec.cubes.len()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = queue.pop_front() {
        for &j in &dec.adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                reached += 1;
                queue.push_back(j);
            }
        }
    }
    if reached != dec.cubes.len() {
        return Err(Error::DisconnectedWhitney { uncovered });
    }
    Ok(dec)
}

fn paint(
    dom: &DomainSpec,
    owner: &mut [usize],
    ci: usize,
    lo: [i64; 3],
    s: i64,
    cursor: &mut [i64; 3],
    axis: usize,
) -> Result<()> {
    if axis == dom.d() {
        let coords = [
            (lo[0] + cursor[0]) as usize,
            (lo[1] + cursor[1]) as usize,
            (lo[2] + cursor[2]) as usize,
        ];
        let idx = dom.index(coords);
        if owner[idx] != usize::MAX {
            return Err(Error::Internal(format!("cubes overlap at cell {coords:?}")));
        }
        owner[idx] = ci;
        return Ok(());
    }
    for off in 0..s {
        cursor[axis] = off;
        paint(dom, owner, ci, lo, s, cursor, axis + 1)?;
    }
    Ok(())
}

/// Face neighbors: owners of cells directly across each face.
fn face_adjacency(dom: &DomainSpec, cubes: &[DyadicCube], owner: &[usize]) -> Vec<Vec<usize>> {
    let n = dom.level();
    let side = dom.side() as i64;
    let mut adj = vec![Vec::new(); cubes.len()];
    for (ci, cube) in cubes.iter().enumerate() {
        let lo = cube.lo(n);
        let s = cube.side_units(n);
        let mut nbrs = std::collections::BTreeSet::new();
        for axis in 0..dom.d() {
            for (plane, _dir) in [(lo[axis] - 1, -1), (lo[axis] + s, 1)] {
                if plane < 0 || plane >= side {
                    continue;
                }
                // All cells on the face plane within the cube's span.
                let mut spans = Vec::new();
                for a in 0..dom.d() {
                    if a == axis {
                        spans.push(plane..plane + 1);
                    } else {
                        spans.push(lo[a]..lo[a] + s);
                    }
                }
                let mut cursor = [0i64; 3];
                scan_spans(dom, &spans, &mut cursor, 0, &mut |coords| {
                    let o = owner[dom.index(coords)];
                    if o != usize::MAX && o != ci {
                        nbrs.insert(o);
                    }
                });
            }
        }
        adj[ci] = nbrs.into_iter().collect();
    }
    adj
}

fn scan_spans(
    dom: &DomainSpec,
    spans: &[std::ops::Range<i64>],
    cursor: &mut [i64; 3],
    axis: usize,
    f: &mut impl FnMut([usize; 3]),
) {
    if axis == dom.d() {
        f([cursor[0] as usize, cursor[1] as usize, cursor[2] as usize]);
        return;
    }
    for x in spans[axis].clone() {
        cursor[axis] = x;
        scan_spans(dom, spans, cursor, axis + 1, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: a cube is accepted iff it satisfies the rule and no
    /// ancestor does.
    fn brute_force_interval(dom: &DomainSpec) -> Vec<DyadicCube> {
        let n = dom.level();
        let bfs = chebyshev_bfs(dom);
        let pyr = Pyramid::build(dom, &bfs);
        let mut out = Vec::new();
        for m in 0..=n {
            for x in 0..(1u32 << m) {
                let cube = DyadicCube { level: m, coords: [x, 0, 0] };
                if !pyr.accepted(&cube) {
                    continue;
                }
                let mut ancestor_hit = false;
                let mut c = x;
                for am in (0..m).rev() {
                    c /= 2;
                    if pyr.accepted(&DyadicCube { level: am, coords: [c, 0, 0] }) {
                        ancestor_hit = true;
                        break;
                    }
                }
                if !ancestor_hit {
                    out.push(cube);
                }
            }
        }
        out.sort_by_key(|c| (c.level, c.coords));
        out
    }

    #[test]
    fn interval_matches_brute_force() {
        let dom = DomainSpec::builtin("interval", 6).unwrap();
        let dec = whitney_decompose(&dom).unwrap();
        assert_eq!(dec.cubes, brute_force_interval(&dom));
        // All accepted intervals satisfy the two-sided ratio bound.
        for r in dec.dist_side_ratios() {
            assert!((2.0..=6.0).contains(&r), "ratio {r}");
        }
        assert!(dec.max_neighbor_level_gap() <= 2);
        // Uncovered layer has width <= 2^-4 per endpoint.
        assert!(dec.uncovered_volume() <= 2.0 * 0.0625);
    }

    #[test]
    fn square_symmetric_under_dihedral_group() {
        let dom = DomainSpec::builtin("square", 6).unwrap();
        let dec = whitney_decompose(&dom).unwrap();
        let set: std::collections::HashSet<(u32, u32, u32)> =
            dec.cubes.iter().map(|c| (c.level, c.coords[0], c.coords[1])).collect();
        for c in &dec.cubes {
            let (x, y) = (c.coords[0], c.coords[1]);
            let last = (1u32 << c.level) - 1;
            // Mirror images and the diagonal flip are also accepted cubes.
            assert!(set.contains(&(c.level, last - x, y)));
            assert!(set.contains(&(c.level, x, last - y)));
            assert!(set.contains(&(c.level, y, x)));
        }
    }

    #[test]
    fn volume_gap_halves_with_resolution() {
        let v6 = whitney_decompose(&DomainSpec::builtin("square", 6).unwrap())
            .unwrap()
            .uncovered_volume();
        let v7 = whitney_decompose(&DomainSpec::builtin("square", 7).unwrap())
            .unwrap()
            .uncovered_volume();
        let ratio = v6 / v7;
        assert!((1.8..=2.2).contains(&ratio), "layer ratio {ratio}");
    }

    #[test]
    fn neighbor_bound() {
        let dom = DomainSpec::builtin("l-shape", 6).unwrap();
        let dec = whitney_decompose(&dom).unwrap();
        assert!(dec.max_neighbor_count() <= 144);
        assert!(dec.max_neighbor_level_gap() <= 2);
    }

    #[test]
    fn thin_domain_errors() {
        // A single row of cells cannot hold any cube with dist >= 2 side.
        let sidelen = 16usize;
        let mut mask = vec![false; sidelen * sidelen];
        for x in 0..sidelen {
            mask[8 * sidelen + x] = true;
        }
        let dom = DomainSpec::new(2, 4, mask).unwrap();
        assert!(matches!(whitney_decompose(&dom), Err(Error::EmptyWhitney(_))));
    }
}
