//! Permutations on `{0, .., n-1}` stored as image arrays.
//!
//! Composition acts on the left: `(a * b)(i) = a(b(i))`. Printing and parsing
//! use 1-based cycle notation, e.g. `(1 2)(3 4)`; the identity prints as `()`.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidElement(format!("{images:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// Rank in `0..n!` via the Lehmer code; the identity has rank 0.
    pub fn rank(&self) -> usize {
        let n = self.0.len();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    pub fn unrank(n: usize, mut rank: usize) -> Perm {
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<u8> = (0..n as u8).collect();
        Perm(digits.into_iter().map(|d| pool.remove(d)).collect())
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.apply(start);
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.apply(j);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// 1-based cycle notation.
    pub fn to_cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("({})", body.join(" "))
            })
            .collect()
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)`; commas are accepted
    /// as separators inside a cycle.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Perm> {
        let mut perm = Perm::identity(n);
        let mut rest = s.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in cycle notation at {rest:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = &open[..close];
            let points: Vec<usize> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point {t:?} in {s:?}")))
                })
                .collect::<Result<_>>()?;
            for &p in &points {
                if p == 0 || p > n {
                    return Err(Error::Parse(format!("point {p} outside 1..={n}")));
                }
            }
            let mut cycle = Perm::identity(n);
            for (i, &p) in points.iter().enumerate() {
                let q = points[(i + 1) % points.len()];
                cycle.0[p - 1] = (q - 1) as u8;
            }
            let cycle = Perm::from_images(cycle.0)
                .map_err(|_| Error::Parse(format!("repeated point in cycle {body:?}")))?;
            perm = perm.compose(&cycle);
            rest = open[close + 1..].trim_start();
        }
        Ok(perm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_roundtrip() {
        for r in 0..120 {
            assert_eq!(Perm::unrank(5, r).rank(), r);
        }
        assert!(Perm::unrank(4, 0).is_identity());
    }

    #[test]
    fn cycle_notation() {
        let p = Perm::parse_cycles("(1 2)(3 4 5)", 5).unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 4, 2]);
        assert_eq!(p.to_cycle_string(), "(1 2)(3 4 5)");
        assert_eq!(Perm::identity(3).to_cycle_string(), "()");
        assert!(Perm::parse_cycles("(1 7)", 4).is_err());
        assert!(Perm::parse_cycles("1 2", 4).is_err());
    }

    #[test]
    fn composition_is_left_action() {
        let a = Perm::parse_cycles("(1 2)", 3).unwrap();
        let b = Perm::parse_cycles("(2 3)", 3).unwrap();
        // a(b(1)) = a(1) = 2, a(b(2)) = a(3) = 3, a(b(3)) = a(2) = 1
        assert_eq!(a.compose(&b).to_cycle_string(), "(1 2 3)");
        assert!(a.compose(&a.inverse()).is_identity());
    }
}
