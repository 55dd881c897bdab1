//! Domains as masks of finest-level dyadic cells over the unit box.
//!
//! The box is `[0,1]^d` internally (a translate of the centered box the
//! estimates are stated on); one cell unit is `2^{-n}`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSpec {
    d: usize,
    level: u32,
    mask: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct DomainJson {
    #[serde(default = "schema_one")]
    schema: u32,
    d: usize,
    n: u32,
    /// Runs of filled cells as `[start, len]` over the row-major cell index.
    rle: Vec<[usize; 2]>,
}

fn schema_one() -> u32 {
    1
}

impl DomainSpec {
    pub fn new(d: usize, level: u32, mask: Vec<bool>) -> Result<Self> {
        assert!((1..=3).contains(&d), "dimension must be 1, 2 or 3");
        let cells = 1usize << (d as u32 * level);
        assert_eq!(mask.len(), cells, "mask must cover the full grid");
        let spec = Self { d, level, mask };
        if spec.mask.iter().all(|&b| !b) {
            return Err(Error::EmptyDomain);
        }
        spec.check_connected()?;
        Ok(spec)
    }

    /// Built-in domains: `interval` (d=1), `square` (d=2), `l-shape` (d=2,
    /// the square minus its top-right quadrant).
    pub fn builtin(name: &str, level: u32) -> Result<Self> {
        match name {
            "interval" => Self::new(1, level, vec![true; 1 << level]),
            "square" => Self::new(2, level, vec![true; 1 << (2 * level)]),
            "l-shape" | "lshape" => {
                let side = 1usize << level;
                let half = side / 2;
                let mut mask = vec![false; side * side];
                for y in 0..side {
                    for x in 0..side {
                        if x < half || y < half {
                            mask[y * side + x] = true;
                        }
                    }
                }
                Self::new(2, level, mask)
            }
            other => Err(Error::InvalidParameter(format!("unknown builtin domain `{other}`"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DomainJson = serde_json::from_str(text)?;
        let cells = 1usize << (raw.d as u32 * raw.n);
        let mut mask = vec![false; cells];
        for [start, len] in raw.rle {
            for cell in mask
                .get_mut(start..start + len)
                .ok_or_else(|| Error::InvalidParameter("rle run out of range".into()))?
            {
                *cell = true;
            }
        }
        Self::new(raw.d, raw.n, mask)
    }

    pub fn to_json(&self) -> String {
        let mut rle = Vec::new();
        let mut run: Option<(usize, usize)> = None;
        for (i, &b) in self.mask.iter().enumerate() {
            match (b, run) {
                (true, None) => run = Some((i, 1)),
                (true, Some((s, l))) => run = Some((s, l + 1)),
                (false, Some((s, l))) => {
                    rle.push([s, l]);
                    run = None;
                }
                (false, None) => {}
            }
        }
        if let Some((s, l)) = run {
            rle.push([s, l]);
        }
        serde_json::to_string(&DomainJson { schema: 1, d: self.d, n: self.level, rle })
            .expect("domain json serializes")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn side(&self) -> usize {
        1 << self.level
    }

    pub fn cell_count(&self) -> usize {
        self.mask.len()
    }

    pub fn filled(&self, coords: [usize; 3]) -> bool {
        self.mask[self.index(coords)]
    }

    pub fn filled_index(&self, idx: usize) -> bool {
        self.mask[idx]
    }

    pub fn index(&self, coords: [usize; 3]) -> usize {
        let side = self.side();
        let mut idx = 0;
        for axis in (0..self.d).rev() {
            idx = idx * side + coords[axis];
        }
        idx
    }

    pub fn coords(&self, mut idx: usize) -> [usize; 3] {
        let side = self.side();
        let mut c = [0usize; 3];
        for item in c.iter_mut().take(self.d) {
            *item = idx % side;
            idx /= side;
        }
        c
    }

    /// Volume of the filled region.
    pub fn volume(&self) -> f64 {
        let filled = self.mask.iter().filter(|&&b| b).count();
        filled as f64 / self.mask.len() as f64
    }

    fn check_connected(&self) -> Result<()> {
        let start = match self.mask.iter().position(|&b| b) {
            Some(s) => s,
            None => return Err(Error::EmptyDomain),
        };
        let mut seen = vec![false; self.mask.len()];
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        let side = self.side();
        while let Some(idx) = queue.pop_front() {
            let c = self.coords(idx);
            for axis in 0..self.d {
                for dir in [-1isize, 1] {
                    let x = c[axis] as isize + dir;
                    if x < 0 || x as usize >= side {
                        continue;
                    }
                    let mut nc = c;
                    nc[axis] = x as usize;
                    let nidx = self.index(nc);
                    if self.mask[nidx] && !seen[nidx] {
                        seen[nidx] = true;
                        queue.push_back(nidx);
                    }
                }
            }
        }
        match self.mask.iter().zip(&seen).position(|(&m, &s)| m && !s) {
            Some(_) => Err(Error::DisconnectedDomain),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let i = DomainSpec::builtin("interval", 4).unwrap();
        assert_eq!(i.cell_count(), 16);
        let s = DomainSpec::builtin("square", 3).unwrap();
        assert_eq!(s.cell_count(), 64);
        let l = DomainSpec::builtin("l-shape", 3).unwrap();
        assert_eq!(l.volume(), 0.75);
    }

    #[test]
    fn json_roundtrip() {
        let l = DomainSpec::builtin("l-shape", 3).unwrap();
        let text = l.to_json();
        let back = DomainSpec::from_json(&text).unwrap();
        assert_eq!(l, back);
    }

    #[test]
    fn disconnected_rejected() {
        let mut mask = vec![false; 16];
        mask[0] = true;
        mask[5] = true;
        assert!(matches!(DomainSpec::new(1, 4, mask), Err(Error::DisconnectedDomain)));
    }
}
