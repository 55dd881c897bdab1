//! Rooted combinatorial trees: partial order, level sets, segments, and the
//! admissible subtree family used by the Hardy-norm characterization.
//!
//! Vertices are dense ids `0..n`. The partial order puts the root at the
//! bottom: `b >= a` when `a` lies on the root path of `b`, and the distance
//! between comparable vertices is the depth difference.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default cap on the subtree size for exhaustive enumeration of the
/// admissible family (the family can grow exponentially).
pub const ENUMERATION_SIZE_CAP: usize = 24;
/// Hard cap on the number of enumerated members, independent of subtree size.
pub const ENUMERATION_COUNT_CAP: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl RootedTree {
    /// Builds a tree from `(parent, child)` edges. Child order is insertion
    /// order, so all downstream enumerations are reproducible.
    pub fn build(edges: &[(usize, usize)], root: usize) -> Result<Self> {
        let mut max_id = root;
        for &(a, b) in edges {
            max_id = max_id.max(a).max(b);
        }
        let n = max_id + 1;
        if n != edges.len() + 1 {
            return Err(Error::NonDenseIds { found: max_id, count: edges.len() + 1 });
        }
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(p, c) in edges {
            if c == root {
                return Err(Error::RootHasParent(root));
            }
            if parent[c].is_some() {
                return Err(Error::DuplicateParent(c));
            }
            parent[c] = Some(p);
            children[p].push(c);
        }
        // BFS from the root assigns depths and detects unreachable vertices;
        // cycles show up as vertices with a parent that are never reached.
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &c in &children[v] {
                if depth[c] != usize::MAX {
                    return Err(Error::CycleDetected(c));
                }
                depth[c] = depth[v] + 1;
                queue.push_back(c);
            }
        }
        if let Some(v) = depth.iter().position(|&d| d == usize::MAX) {
            // A parented but unreachable vertex sits on a cycle detached
            // from the root; report it as a cycle, otherwise as disconnected.
            return Err(if on_cycle(&parent, v) {
                Error::CycleDetected(v)
            } else {
                Error::Disconnected(v)
            });
        }
        Ok(Self { root, parent, children, depth })
    }

    /// Single-vertex tree.
    pub fn singleton() -> Self {
        Self { root: 0, parent: vec![None], children: vec![Vec::new()], depth: vec![0] }
    }

    /// Path 0 - 1 - ... - (n-1) rooted at 0.
    pub fn path(n: usize) -> Self {
        assert!(n >= 1);
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::build(&edges, 0).expect("path edges are valid")
    }

    /// Star: root 0 with `leaves` children.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Self::build(&edges, 0).expect("star edges are valid")
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// `b >= a` in the tree order: `a` lies on the root path of `b`.
    pub fn is_above_or_eq(&self, b: usize, a: usize) -> bool {
        let mut cur = b;
        while self.depth[cur] > self.depth[a] {
            cur = self.parent[cur].expect("depth > 0 implies a parent");
        }
        cur == a
    }

    /// Distance between comparable vertices, `rho(a, b)` with `b >= a`.
    pub fn distance_up(&self, a: usize, b: usize) -> Option<usize> {
        if self.is_above_or_eq(b, a) {
            Some(self.depth[b] - self.depth[a])
        } else {
            None
        }
    }

    /// The segment `[a, b]` of vertices between comparable `a <= b`,
    /// listed from `a` up to `b`.
    pub fn segment(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if !self.is_above_or_eq(b, a) {
            return None;
        }
        let mut seg = Vec::with_capacity(self.depth[b] - self.depth[a] + 1);
        let mut cur = b;
        loop {
            seg.push(cur);
            if cur == a {
                break;
            }
            cur = self.parent[cur].expect("walking towards an ancestor");
        }
        seg.reverse();
        Some(seg)
    }

    /// `V_j(w)`: vertices strictly above `w` at distance `j` (for `j = 0`,
    /// the singleton `{w}`), in BFS order.
    pub fn level_set(&self, w: usize, j: usize) -> Vec<usize> {
        let mut frontier = vec![w];
        for _ in 0..j {
            let mut next = Vec::new();
            for &v in &frontier {
                next.extend_from_slice(&self.children[v]);
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        frontier
    }

    /// Vertices of the subtree rooted at `w`, in DFS preorder.
    pub fn subtree(&self, w: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![w];
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in self.children[v].iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.len()
    }
}

fn on_cycle(parent: &[Option<usize>], start: usize) -> bool {
    let mut slow = start;
    let mut seen = std::collections::HashSet::new();
    while let Some(p) = parent[slow] {
        if !seen.insert(slow) {
            return true;
        }
        slow = p;
    }
    false
}

/// A member of the admissible family `J'` anchored at `base`: `base` is the
/// unique minimal vertex, and every non-maximal member keeps all of its host
/// children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtreeSelection {
    pub base: usize,
    /// Sorted member vertex ids.
    pub members: Vec<usize>,
}

impl SubtreeSelection {
    pub fn new(tree: &RootedTree, base: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let sel = Self { base, members };
        sel.validate(tree)?;
        Ok(sel)
    }

    /// A rooted connected subtree without the all-children requirement;
    /// symmetrization accepts these, the norm characterization does not.
    pub fn new_rooted(tree: &RootedTree, base: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let sel = Self { base, members };
        sel.validate_rooted(tree)?;
        Ok(sel)
    }

    pub fn singleton(base: usize) -> Self {
        Self { base, members: vec![base] }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Connectivity and base-minimality only.
    pub fn validate_rooted(&self, tree: &RootedTree) -> Result<()> {
        if !self.contains(self.base) {
            return Err(Error::InvalidSelection("base not a member".into()));
        }
        for &v in &self.members {
            if v >= tree.len() {
                return Err(Error::VertexOutOfRange(v));
            }
            if !tree.is_above_or_eq(v, self.base) {
                return Err(Error::InvalidSelection(format!(
                    "member {v} is not above the base {}",
                    self.base
                )));
            }
            if v != self.base {
                let p = tree.parent(v).expect("non-base member has a parent");
                if !self.contains(p) {
                    return Err(Error::InvalidSelection(format!(
                        "member {v} is disconnected from the base"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks both admissibility conditions against the host tree.
    pub fn validate(&self, tree: &RootedTree) -> Result<()> {
        self.validate_rooted(tree)?;
        for &v in &self.members {
            let kids = tree.children(v);
            let inside = kids.iter().filter(|c| self.contains(**c)).count();
            if inside != 0 && inside != kids.len() {
                return Err(Error::InvalidSelection(format!(
                    "non-maximal member {v} is missing some children"
                )));
            }
        }
        Ok(())
    }

    /// Maximal members: those with no child inside the selection.
    pub fn maxima(&self, tree: &RootedTree) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&v| !tree.children(v).iter().any(|c| self.contains(*c)))
            .collect()
    }

    /// The interior subtree: members minus the maximal ones.
    pub fn interior(&self, tree: &RootedTree) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&v| tree.children(v).iter().any(|c| self.contains(*c)))
            .collect()
    }

    /// The induced member of `J'` anchored at a member vertex `v`.
    pub fn induced_at(&self, tree: &RootedTree, v: usize) -> SubtreeSelection {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&m| tree.is_above_or_eq(m, v))
            .collect();
        SubtreeSelection { base: v, members }
    }
}

/// Number of admissible subtrees below each vertex (`1 + prod over children`),
/// saturating at `u128::MAX`.
fn family_counts(tree: &RootedTree, base: usize) -> Vec<(usize, u128)> {
    let order = tree.subtree(base);
    let mut counts: Vec<(usize, u128)> = Vec::with_capacity(order.len());
    let mut count_of = vec![0u128; tree.len()];
    for &v in order.iter().rev() {
        let mut prod: u128 = 1;
        for &c in tree.children(v) {
            prod = prod.saturating_mul(count_of[c]);
        }
        let total = if tree.children(v).is_empty() { 1 } else { prod.saturating_add(1) };
        count_of[v] = total;
        counts.push((v, total));
    }
    counts.reverse();
    counts
}

/// Enumerates the full admissible family `J'_{base}`, each member exactly
/// once, including the singleton `{base}`.
pub fn enumerate_admissible(tree: &RootedTree, base: usize) -> Result<Vec<SubtreeSelection>> {
    enumerate_admissible_capped(tree, base, ENUMERATION_SIZE_CAP)
}

pub fn enumerate_admissible_capped(
    tree: &RootedTree,
    base: usize,
    size_cap: usize,
) -> Result<Vec<SubtreeSelection>> {
    let size = tree.subtree(base).len();
    if size > size_cap {
        return Err(Error::EnumerationCap { base, size, cap: size_cap });
    }
    let total = family_counts(tree, base)[0].1;
    if total > ENUMERATION_COUNT_CAP {
        return Err(Error::EnumerationCount { base, count: total, cap: ENUMERATION_COUNT_CAP });
    }
    let sets = enumerate_sets(tree, base);
    Ok(sets
        .into_iter()
        .map(|mut members| {
            members.sort_unstable();
            SubtreeSelection { base, members }
        })
        .collect())
}

fn enumerate_sets(tree: &RootedTree, v: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![v]];
    let kids = tree.children(v);
    if kids.is_empty() {
        return out;
    }
    // Cartesian product of the children's families, each combination glued
    // under v.
    let per_child: Vec<Vec<Vec<usize>>> = kids.iter().map(|&c| enumerate_sets(tree, c)).collect();
    let mut combos: Vec<Vec<usize>> = vec![vec![v]];
    for child_sets in &per_child {
        let mut next = Vec::with_capacity(combos.len() * child_sets.len());
        for combo in &combos {
            for cs in child_sets {
                let mut merged = combo.clone();
                merged.extend_from_slice(cs);
                next.push(merged);
            }
        }
        combos = next;
    }
    out.extend(combos);
    out
}

/// Draws `n` members of `J'_{base}` uniformly at random (with replacement).
/// Exact uniformity comes from the product-form family counts; counts beyond
/// `u128` saturate, which only perturbs probabilities below 1e-30.
pub fn sample_admissible<R: rand::Rng>(
    tree: &RootedTree,
    base: usize,
    n: usize,
    rng: &mut R,
) -> Vec<SubtreeSelection> {
    let mut count_of = vec![0.0f64; tree.len()];
    for &v in tree.subtree(base).iter().rev() {
        let kids = tree.children(v);
        if kids.is_empty() {
            count_of[v] = 1.0;
        } else {
            let prod: f64 = kids.iter().map(|&c| count_of[c]).product();
            count_of[v] = prod + 1.0;
        }
    }
    (0..n)
        .map(|_| {
            let mut members = Vec::new();
            sample_into(tree, base, &count_of, rng, &mut members);
            members.sort_unstable();
            SubtreeSelection { base, members }
        })
        .collect()
}

fn sample_into<R: rand::Rng>(
    tree: &RootedTree,
    v: usize,
    count_of: &[f64],
    rng: &mut R,
    members: &mut Vec<usize>,
) {
    members.push(v);
    let kids = tree.children(v);
    if kids.is_empty() {
        return;
    }
    // P(stop here) = 1 / count(v); otherwise recurse independently per child.
    if rng.random::<f64>() * count_of[v] < 1.0 {
        return;
    }
    for &c in kids {
        sample_into(tree, c, count_of, rng, members);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_edges_single_vertex() {
        let t = RootedTree::build(&[], 0).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.depth(0), 0);
    }

    #[test]
    fn path_depths() {
        let t = RootedTree::build(&[(0, 1), (1, 2)], 0).unwrap();
        assert_eq!(t.depth(2), 2);
        assert_eq!(t.level_set(0, 2), vec![2]);
        assert_eq!(t.level_set(2, 1), Vec::<usize>::new());
    }

    #[test]
    fn star_level_one() {
        let t = RootedTree::build(&[(0, 1), (0, 2), (0, 3), (0, 4)], 0).unwrap();
        assert_eq!(t.level_set(0, 1).len(), 4);
        assert_eq!(t.level_set(0, 0), vec![0]);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            RootedTree::build(&[(0, 1), (2, 1)], 0),
            Err(Error::DuplicateParent(1))
        ));
        // 0 -> 1 -> 2 -> 1 is a duplicate parent; a genuine cycle needs a
        // detached loop: 1 -> 2 -> 1 cannot be written without duplicates, so
        // use 1 -> 2, 2 -> 3, 3 -> 1... again duplicate. A cycle among ids
        // with one parent each: 1 <- 2 <- 3 <- 1.
        let r = RootedTree::build(&[(1, 2), (2, 3), (3, 1)], 0);
        assert!(matches!(r, Err(Error::CycleDetected(_))));
        let r = RootedTree::build(&[(0, 1), (0, 3)], 0);
        assert!(matches!(r, Err(Error::NonDenseIds { .. })));
    }

    #[test]
    fn segments_and_order() {
        let t = RootedTree::build(&[(0, 1), (1, 2), (1, 3)], 0).unwrap();
        assert!(t.is_above_or_eq(2, 0));
        assert!(t.is_above_or_eq(2, 1));
        assert!(!t.is_above_or_eq(2, 3));
        assert_eq!(t.segment(0, 2), Some(vec![0, 1, 2]));
        assert_eq!(t.segment(2, 3), None);
        assert_eq!(t.distance_up(0, 2), Some(2));
    }

    #[test]
    fn enumerate_path_matches_prefixes() {
        let t = RootedTree::path(3);
        let fam = enumerate_admissible(&t, 0).unwrap();
        let sets: Vec<Vec<usize>> = fam.iter().map(|s| s.members.clone()).collect();
        assert_eq!(sets.len(), 3);
        assert!(sets.contains(&vec![0]));
        assert!(sets.contains(&vec![0, 1]));
        assert!(sets.contains(&vec![0, 1, 2]));
    }

    #[test]
    fn enumerate_star_two_leaves() {
        let t = RootedTree::star(2);
        let fam = enumerate_admissible(&t, 0).unwrap();
        assert_eq!(fam.len(), 2);
        let sets: Vec<Vec<usize>> = fam.iter().map(|s| s.members.clone()).collect();
        assert!(sets.contains(&vec![0]));
        assert!(sets.contains(&vec![0, 1, 2]));
        // Exhaustive cross-check over all 2^3 subsets.
        let mut valid = 0;
        for bits in 0u32..8 {
            let members: Vec<usize> = (0..3).filter(|i| bits >> i & 1 == 1).collect();
            if members.contains(&0)
                && SubtreeSelection::new(&t, 0, members.clone()).is_ok()
            {
                valid += 1;
            }
        }
        assert_eq!(valid, 2);
    }

    #[test]
    fn enumeration_cap_errors() {
        let t = RootedTree::path(30);
        assert!(matches!(
            enumerate_admissible(&t, 0),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn interior_keeps_all_children() {
        let t = RootedTree::build(&[(0, 1), (0, 2), (1, 3), (1, 4)], 0).unwrap();
        for d in enumerate_admissible(&t, 0).unwrap() {
            for v in d.interior(&t) {
                for &c in t.children(v) {
                    assert!(d.contains(c));
                }
            }
        }
    }

    fn arb_tree(max: usize) -> impl Strategy<Value = RootedTree> {
        // Random parent pointers: vertex v attaches to a uniform vertex < v.
        prop::collection::vec(0.0f64..1.0, 1..max).prop_map(|picks| {
            let edges: Vec<(usize, usize)> = picks
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let v = i + 1;
                    ((r * v as f64) as usize, v)
                })
                .collect();
            RootedTree::build(&edges, 0).unwrap()
        })
    }

    proptest! {
        #[test]
        fn enumerated_members_are_valid_and_counted(t in arb_tree(10)) {
            let fam = enumerate_admissible(&t, 0).unwrap();
            for d in &fam {
                prop_assert!(d.validate(&t).is_ok());
            }
            // Each member appears exactly once.
            let mut keys: Vec<Vec<usize>> = fam.iter().map(|d| d.members.clone()).collect();
            keys.sort();
            keys.dedup();
            prop_assert_eq!(keys.len(), fam.len());
            // Count matches the product formula.
            let expected = family_counts(&t, 0)[0].1;
            prop_assert_eq!(fam.len() as u128, expected);
        }

        #[test]
        fn order_is_root_path_membership(t in arb_tree(12), a in 0usize..12, b in 0usize..12) {
            let a = a % t.len();
            let b = b % t.len();
            let on_path = t.segment(0, b).unwrap().contains(&a);
            prop_assert_eq!(t.is_above_or_eq(b, a), on_path);
        }

        #[test]
        fn sampled_members_are_valid(t in arb_tree(40)) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
            for d in sample_admissible(&t, 0, 16, &mut rng) {
                prop_assert!(d.validate(&t).is_ok());
            }
        }
    }
}
