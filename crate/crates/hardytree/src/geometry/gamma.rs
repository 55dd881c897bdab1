//! Boundary generators: a distinguished point, a whole face, or a Cantor set
//! on a face, realized as finite unions of rational boxes so that sup-norm
//! distances to dyadic cubes are exact.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

use super::domain::DomainSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaSpec {
    /// A single point with rational coordinates in the unit box.
    Point { coords: Vec<(i64, i64)> },
    /// The full face `{x_axis = side}` of the unit box.
    Face { axis: usize, side: u8 },
    /// A two-piece Cantor set with contraction `1/k` on a face of the unit
    /// box (d = 2). `depth = 0` picks the finest depth for the resolution.
    Cantor { k: u32, depth: u32, axis: usize, side: u8 },
}

impl GammaSpec {
    /// Origin-corner point.
    pub fn corner(d: usize) -> Self {
        GammaSpec::Point { coords: vec![(0, 1); d] }
    }

    pub fn bottom_face() -> Self {
        GammaSpec::Face { axis: 1, side: 0 }
    }

    /// Parses `point`, `point:1/2,0`, `face:AXIS:SIDE`, `cantor:1/3`,
    /// `cantor:1/3:DEPTH`.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let parse_frac = |s: &str| -> Result<(i64, i64)> {
            let (num, den) = match s.split_once('/') {
                Some((a, b)) => (a.parse().ok(), b.parse().ok()),
                None => (s.parse().ok(), Some(1)),
            };
            match (num, den) {
                (Some(n), Some(d)) if d > 0 => Ok((n, d)),
                _ => Err(Error::InvalidParameter(format!("bad fraction `{s}`"))),
            }
        };
        match parts[0] {
            "point" => {
                if parts.len() == 1 {
                    Ok(Self::corner(d))
                } else {
                    let coords = parts[1]
                        .split(',')
                        .map(parse_frac)
                        .collect::<Result<Vec<_>>>()?;
                    Ok(GammaSpec::Point { coords })
                }
            }
            "face" => {
                let axis = parts.get(1).and_then(|s| s.parse().ok()).unwrap_or(d - 1);
                let side = parts.get(2).and_then(|s| s.parse().ok()).unwrap_or(0);
                Ok(GammaSpec::Face { axis, side })
            }
            "cantor" => {
                let (num, den) = parse_frac(parts.get(1).copied().unwrap_or("1/3"))?;
                if num != 1 || den < 3 {
                    return Err(Error::InvalidParameter(
                        "cantor ratio must be 1/k with k >= 3".into(),
                    ));
                }
                let depth = parts.get(2).and_then(|s| s.parse().ok()).unwrap_or(0);
                Ok(GammaSpec::Cantor { k: den as u32, depth, axis: 1, side: 0 })
            }
            other => Err(Error::InvalidParameter(format!("unknown generator `{other}`"))),
        }
    }
}

/// The generator realized at a resolution: rational boxes `[lo, hi]/den`
/// inside the unit box, plus the derived box-counting exponent of the
/// scaling law `h(t) = t^theta`.
#[derive(Debug, Clone)]
pub struct GammaSet {
    pub d: usize,
    pub den: i128,
    /// `(lo, hi)` per box, coordinates in multiples of `1/den`.
    pub boxes: Vec<([i128; 3], [i128; 3])>,
    pub theta: f64,
    pub spec: GammaSpec,
}

impl GammaSet {
    pub fn build(spec: &GammaSpec, d: usize, resolution: u32) -> Result<Self> {
        match spec {
            GammaSpec::Point { coords } => {
                if coords.len() != d {
                    return Err(Error::InvalidParameter(format!(
                        "point has {} coordinates, domain is {d}-dimensional",
                        coords.len()
                    )));
                }
                let mut den: i128 = 1;
                for &(_, q) in coords {
                    den = lcm(den, q as i128);
                }
                let mut lo = [0i128; 3];
                for (i, &(p, q)) in coords.iter().enumerate() {
                    let x = p as i128 * (den / q as i128);
                    if x < 0 || x > den {
                        return Err(Error::InvalidParameter("point outside the unit box".into()));
                    }
                    lo[i] = x;
                }
                Ok(Self { d, den, boxes: vec![(lo, lo)], theta: 0.0, spec: spec.clone() })
            }
            GammaSpec::Face { axis, side } => {
                if *axis >= d || *side > 1 {
                    return Err(Error::InvalidParameter("face axis/side out of range".into()));
                }
                let den = 1i128;
                let mut lo = [0i128; 3];
                let mut hi = [0i128; 3];
                for i in 0..d {
                    hi[i] = 1;
                }
                lo[*axis] = *side as i128;
                hi[*axis] = *side as i128;
                Ok(Self { d, den, boxes: vec![(lo, hi)], theta: (d - 1) as f64, spec: spec.clone() })
            }
            GammaSpec::Cantor { k, depth, axis, side } => {
                if d != 2 {
                    return Err(Error::InvalidParameter(
                        "cantor generator requires a 2-dimensional domain".into(),
                    ));
                }
                if *axis >= d || *side > 1 {
                    return Err(Error::InvalidParameter("face axis/side out of range".into()));
                }
                // Depth so that pieces are no coarser than the grid.
                let depth = if *depth > 0 {
                    *depth
                } else {
                    let mut l = 1u32;
                    while (*k as f64).powi(l as i32) < (resolution as f64).exp2() {
                        l += 1;
                    }
                    l
                };
                let kk = *k as i128;
                let mut den: i128 = 1;
                for _ in 0..depth {
                    den = den
                        .checked_mul(kk)
                        .ok_or_else(|| Error::InvalidParameter("cantor depth too deep".into()))?;
                }
                // Two-piece construction keeping [0, 1/k] and [(k-1)/k, 1].
                let mut intervals: Vec<(i128, i128)> = vec![(0, den)];
                let mut scale = den;
                for _ in 0..depth {
                    scale /= kk;
                    let mut next = Vec::with_capacity(intervals.len() * 2);
                    for (lo, _hi) in intervals {
                        next.push((lo, lo + scale));
                        next.push((lo + (kk - 1) * scale, lo + kk * scale));
                    }
                    intervals = next;
                }
                let other = 1 - axis;
                let boxes = intervals
                    .into_iter()
                    .map(|(lo, hi)| {
                        let mut blo = [0i128; 3];
                        let mut bhi = [0i128; 3];
                        blo[other] = lo;
                        bhi[other] = hi;
                        blo[*axis] = *side as i128 * den;
                        bhi[*axis] = blo[*axis];
                        (blo, bhi)
                    })
                    .collect();
                Ok(Self {
                    d,
                    den,
                    boxes,
                    theta: 2f64.ln() / (*k as f64).ln(),
                    spec: spec.clone(),
                })
            }
        }
    }

    /// `h(t) = t^theta` at `t = 2^{-nu}` relative to `t0 = 2^{-nu0}`:
    /// `h(2^{-nu}) / h(2^{-nu0})`.
    pub fn h_ratio(&self, nu: u32, nu0: u32) -> f64 {
        (-self.theta * (nu as f64 - nu0 as f64)).exp2()
    }

    /// Exact sup-norm distance to the box `[lo, hi] / (1 << shift)` (grid
    /// coordinates at scale `2^{-shift}`), returned as a fraction
    /// `(numerator, denominator)` with denominator `den << shift`.
    pub fn dist_to_grid_box(&self, lo: [i64; 3], hi: [i64; 3], shift: u32) -> (i128, i128) {
        let scale = 1i128 << shift;
        let denom = self.den * scale;
        let mut best = i128::MAX;
        for (glo, ghi) in &self.boxes {
            let mut gap = 0i128;
            for axis in 0..self.d {
                // Common denominator den * 2^shift.
                let a_lo = lo[axis] as i128 * self.den;
                let a_hi = hi[axis] as i128 * self.den;
                let b_lo = glo[axis] * scale;
                let b_hi = ghi[axis] * scale;
                let g = (b_lo - a_hi).max(a_lo - b_hi).max(0);
                gap = gap.max(g);
            }
            best = best.min(gap);
            if best == 0 {
                break;
            }
        }
        (best, denom)
    }

    pub fn dist_to_grid_box_f64(&self, lo: [i64; 3], hi: [i64; 3], shift: u32) -> f64 {
        let (num, den) = self.dist_to_grid_box(lo, hi, shift);
        num as f64 / den as f64
    }

    /// Exact sup-norm distance to a point given at scale `2^{-shift}`.
    pub fn dist_to_grid_point(&self, x: [i64; 3], shift: u32) -> f64 {
        self.dist_to_grid_box_f64(x, x, shift)
    }

    /// Sup-norm distance to an arbitrary point of the unit box, in floating
    /// point (quadrature use only).
    pub fn dist_f64(&self, x: [f64; 3]) -> f64 {
        let den = self.den as f64;
        let mut best = f64::INFINITY;
        for (glo, ghi) in &self.boxes {
            let mut gap = 0.0f64;
            for axis in 0..self.d {
                let lo = glo[axis] as f64 / den;
                let hi = ghi[axis] as f64 / den;
                gap = gap.max(lo - x[axis]).max(x[axis] - hi);
            }
            best = best.min(gap.max(0.0));
        }
        best
    }

    /// The dyadic scale index of a distance `num/den`: the unique `k >= 0`
    /// with `2^{-k} <= dist < 2^{-k+1}` (clamped to 0 for distances >= 1).
    pub fn scale_index(num: i128, den: i128) -> Result<u32> {
        if num <= 0 {
            return Err(Error::GammaOffBoundary(
                "zero distance: cube touches the generator".into(),
            ));
        }
        let mut k = 0u32;
        let mut shifted = num;
        while shifted < den {
            shifted <<= 1;
            k += 1;
            if k > 200 {
                return Err(Error::Internal("distance scale out of range".into()));
            }
        }
        Ok(k)
    }

    /// Number of closed level-`k` dyadic cells meeting the generator.
    pub fn box_count(&self, k: u32) -> usize {
        let cells = 1i128 << k;
        let mut set = std::collections::HashSet::new();
        for (lo, hi) in &self.boxes {
            let mut ranges = Vec::new();
            for axis in 0..self.d {
                // Closed cells [c, c+1]/2^k meeting [lo, hi]/den.
                let c_min = div_floor(lo[axis] * cells, self.den);
                let mut c_max = div_ceil(hi[axis] * cells, self.den);
                if c_max > c_min {
                    c_max -= 1;
                } // hi on a cell edge still meets the left cell
                let c_min = c_min.max(0).min(cells - 1);
                let c_max = c_max.max(0).min(cells - 1);
                ranges.push((c_min, c_max));
            }
            let mut stack = vec![([0i128; 3], 0usize)];
            while let Some((mut cur, axis)) = stack.pop() {
                if axis == self.d {
                    set.insert(cur);
                    continue;
                }
                for c in ranges[axis].0..=ranges[axis].1 {
                    cur[axis] = c;
                    stack.push((cur, axis + 1));
                }
            }
        }
        set.len()
    }

    /// Validates that the generator lies on the boundary of the domain: zero
    /// distance both to the filled region and to its complement.
    pub fn validate_on_boundary(&self, dom: &DomainSpec) -> Result<()> {
        let n = dom.level();
        let scale = 1i128 << n;
        for (idx, (glo, ghi)) in self.boxes.iter().enumerate() {
            // Distance to the exterior of the unit box, at the common scale.
            let mut to_exterior = i128::MAX;
            for axis in 0..self.d {
                to_exterior = to_exterior.min(glo[axis]).min(self.den - ghi[axis]);
            }
            let mut to_filled = i128::MAX;
            let mut to_complement = to_exterior * scale;
            for cell in 0..dom.cell_count() {
                let c = dom.coords(cell);
                let mut gap = 0i128;
                for axis in 0..self.d {
                    let a_lo = c[axis] as i128 * self.den;
                    let a_hi = (c[axis] as i128 + 1) * self.den;
                    let b_lo = glo[axis] * scale;
                    let b_hi = ghi[axis] * scale;
                    gap = gap.max((b_lo - a_hi).max(a_lo - b_hi).max(0));
                }
                if dom.filled_index(cell) {
                    to_filled = to_filled.min(gap);
                } else {
                    to_complement = to_complement.min(gap);
                }
            }
            if to_filled != 0 || to_complement != 0 {
                return Err(Error::GammaOffBoundary(format!(
                    "box {idx} has distance {to_filled} to the domain and {to_complement} to its complement"
                )));
            }
        }
        Ok(())
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && (a < 0) != (b < 0) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && (a < 0) == (b < 0) {
        q + 1
    } else {
        q
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn point_distance_exact() {
        let g = GammaSet::build(&GammaSpec::corner(2), 2, 4).unwrap();
        // Cell [1,2]x[3,4] at scale 2^-4: sup distance to origin = 3/16.
        let (num, den) = g.dist_to_grid_box([1, 3, 0], [2, 4, 0], 4);
        assert_eq!((num, den), (3, 16));
        assert_eq!(GammaSet::scale_index(num, den).unwrap(), 3); // 1/8 <= 3/16 < 1/4
    }

    #[test]
    fn face_distance() {
        let g = GammaSet::build(&GammaSpec::bottom_face(), 2, 4).unwrap();
        let (num, den) = g.dist_to_grid_box([5, 3, 0], [6, 4, 0], 4);
        assert_eq!(num * 16, den * 3); // distance 3/16 below the cell
    }

    #[test]
    fn scale_index_brackets() {
        // dist = 1/2 -> k = 1; dist = 0.3 in (1/4, 1/2) -> k = 2.
        assert_eq!(GammaSet::scale_index(1, 2).unwrap(), 1);
        assert_eq!(GammaSet::scale_index(3, 10).unwrap(), 2);
        assert_eq!(GammaSet::scale_index(1, 1).unwrap(), 0);
    }

    #[test]
    fn cantor_third_structure() {
        let g = GammaSet::build(
            &GammaSpec::Cantor { k: 3, depth: 3, axis: 1, side: 0 },
            2,
            6,
        )
        .unwrap();
        assert_eq!(g.boxes.len(), 8);
        assert_eq!(g.den, 27);
        assert_relative_eq!(g.theta, 2f64.ln() / 3f64.ln());
    }

    #[test]
    fn cantor_box_counting_tracks_theta() {
        let g = GammaSet::build(
            &GammaSpec::Cantor { k: 3, depth: 8, axis: 1, side: 0 },
            2,
            8,
        )
        .unwrap();
        let mut ratios = Vec::new();
        for k in 2..=8 {
            let count = g.box_count(k) as f64;
            ratios.push(count * (-g.theta * k as f64).exp2());
        }
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(
            max / min <= 4.0,
            "box-counting law drifts: ratios {ratios:?}"
        );
    }

    #[test]
    fn face_box_counting_linear() {
        let g = GammaSet::build(&GammaSpec::bottom_face(), 2, 6).unwrap();
        for k in 1..=6u32 {
            let count = g.box_count(k);
            // Closed cells meeting a full edge: the touching row.
            assert_eq!(count, 1 << k, "k={k}");
        }
    }

    #[test]
    fn boundary_validation() {
        let dom = DomainSpec::builtin("square", 4).unwrap();
        let corner = GammaSet::build(&GammaSpec::corner(2), 2, 4).unwrap();
        corner.validate_on_boundary(&dom).unwrap();
        let face = GammaSet::build(&GammaSpec::bottom_face(), 2, 4).unwrap();
        face.validate_on_boundary(&dom).unwrap();
        // An interior point is rejected.
        let mid = GammaSet::build(
            &GammaSpec::Point { coords: vec![(1, 2), (1, 2)] },
            2,
            4,
        )
        .unwrap();
        assert!(matches!(
            mid.validate_on_boundary(&dom),
            Err(Error::GammaOffBoundary(_))
        ));
    }

    #[test]
    fn parse_specs() {
        assert_eq!(GammaSpec::parse("point", 2).unwrap(), GammaSpec::corner(2));
        assert_eq!(
            GammaSpec::parse("face:1:0", 2).unwrap(),
            GammaSpec::Face { axis: 1, side: 0 }
        );
        assert_eq!(
            GammaSpec::parse("cantor:1/3", 2).unwrap(),
            GammaSpec::Cantor { k: 3, depth: 0, axis: 1, side: 0 }
        );
        assert!(GammaSpec::parse("blob", 2).is_err());
    }
}
