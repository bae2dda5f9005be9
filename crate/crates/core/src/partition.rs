//! Module types `G_λ = ∏ O/π^{λ_i}` encoded as partitions, optionally clamped.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing positive parts. With `clamp = Some(a)` every part is at
/// most `a`, and a part equal to `a` stands for "at least `a`".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct Partition {
    parts: Vec<u32>,
    clamp: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    parts: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    clamp: Option<u32>,
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = Error;
    fn try_from(r: PartitionRepr) -> Result<Self> {
        Partition::with_clamp(r.parts, r.clamp)
    }
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> Self {
        PartitionRepr { parts: p.parts, clamp: p.clamp }
    }
}

impl Partition {
    /// Unclamped partition; parts are sorted and zeros dropped.
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        let mut parts = parts.into();
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts, clamp: None }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new(), clamp: None }
    }

    pub fn with_clamp(parts: impl Into<Vec<u32>>, clamp: Option<u32>) -> Result<Self> {
        let mut p = Partition::new(parts);
        if let Some(a) = clamp {
            if a == 0 {
                return Err(Error::Partition("clamp must be positive".into()));
            }
            if p.parts.first().is_some_and(|&m| m > a) {
                return Err(Error::Partition(format!("part {} exceeds clamp {a}", p.parts[0])));
            }
        }
        p.clamp = clamp;
        Ok(p)
    }

    /// Clamped copy: parts above `a` become `a`.
    pub fn clamped(&self, a: u32) -> Self {
        debug_assert!(a > 0);
        let parts = self.parts.iter().map(|&x| x.min(a)).collect();
        Partition { parts, clamp: Some(a) }
    }

    pub fn unclamped(&self) -> Self {
        Partition { parts: self.parts.clone(), clamp: None }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn clamp_level(&self) -> Option<u32> {
        self.clamp
    }

    /// Number of parts (the rank `r`).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `Σ λ_i`, so that `|G_λ| = q^size`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn order(&self, q: u64) -> BigUint {
        BigUint::from(q).pow(self.size())
    }

    /// `λ′_j = #{i : λ_i ≥ j}` for `j = 1..=λ₁`.
    pub fn conjugate(&self) -> Partition {
        let m = self.largest();
        let parts = (1..=m).map(|j| self.parts.iter().filter(|&&x| x >= j).count() as u32).collect();
        Partition { parts, clamp: None }
    }

    /// `λ′_j` with the convention `λ′_j = 0` past the end.
    pub fn conjugate_part(&self, j: u32) -> u32 {
        self.parts.iter().filter(|&&x| x >= j).count() as u32
    }

    /// Componentwise containment `μ_i ≤ λ_i`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// Multiplicity of each distinct part, largest part first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &x in &self.parts {
            match out.last_mut() {
                Some((v, m)) if *v == x => *m += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    /// True when every odd part below the clamp occurs an even number of
    /// times (parts equal to the clamp are unconstrained).
    pub fn satisfies_parity_law(&self) -> bool {
        let a = self.clamp.unwrap_or(u32::MAX);
        self.multiplicities().iter().all(|&(v, m)| v >= a || v % 2 == 0 || m % 2 == 0)
    }

    /// All partitions with parts `≤ max_part` and at most `max_len` parts.
    pub fn enumerate(max_part: u32, max_len: usize) -> Vec<Partition> {
        fn rec(max_part: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition { parts: cur.clone(), clamp: None });
            if left == 0 {
                return;
            }
            for v in (1..=max_part).rev() {
                cur.push(v);
                rec(v, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(max_part, max_len, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All partitions of total size at most `max_size`.
    pub fn enumerate_by_size(max_size: u32) -> Vec<Partition> {
        Partition::enumerate(max_size, max_size as usize).into_iter().filter(|p| p.size() <= max_size).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            f.write_str("∅")?;
        } else {
            let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
            f.write_str(&s.join("."))?;
        }
        if let Some(a) = self.clamp {
            write!(f, "@{a}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, clamp) = match s.split_once('@') {
            Some((b, a)) => {
                let a: u32 = a.trim().parse().map_err(|_| Error::Partition(format!("bad clamp in `{s}`")))?;
                (b.trim(), Some(a))
            }
            None => (s, None),
        };
        let parts = if body.is_empty() || body == "∅" {
            Vec::new()
        } else {
            body.split('.')
                .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Partition(format!("bad part `{t}` in `{s}`"))))
                .collect::<Result<Vec<_>>>()?
        };
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Partition(format!("parts of `{s}` are not weakly decreasing")));
        }
        Partition::with_clamp(parts, clamp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_examples() {
        let p = Partition::new(vec![3, 1, 1]);
        assert_eq!(p.conjugate().parts(), &[3, 1, 1]);
        let p = Partition::new(vec![2, 2, 1]);
        assert_eq!(p.conjugate().parts(), &[3, 2]);
        assert!(Partition::empty().conjugate().is_empty());
    }

    #[test]
    fn text_and_json_forms() {
        let p: Partition = "2.1.1@2".parse().unwrap();
        assert_eq!(p.parts(), &[2, 1, 1]);
        assert_eq!(p.clamp_level(), Some(2));
        assert_eq!(p.to_string(), "2.1.1@2");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"parts":[2,1,1],"clamp":2}"#);
        assert_eq!(serde_json::from_str::<Partition>(&json).unwrap(), p);
        let e: Partition = "∅@3".parse().unwrap();
        assert!(e.is_empty());
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1.2".parse::<Partition>().is_err());
        assert!("3.1@2".parse::<Partition>().is_err());
        assert!(serde_json::from_str::<Partition>(r#"{"parts":[3],"clamp":2}"#).is_err());
    }

    #[test]
    fn parity_law() {
        assert!(Partition::new(vec![2, 1, 1]).satisfies_parity_law());
        assert!(!Partition::new(vec![3, 1, 1]).satisfies_parity_law());
        assert!(Partition::with_clamp(vec![3, 1, 1], Some(3)).unwrap().satisfies_parity_law());
    }

    #[test]
    fn enumeration_counts() {
        // partitions fitting in a 2x2 box: ∅,1,2,11,21,22
        assert_eq!(Partition::enumerate(2, 2).len(), 6);
        // partitions of size ≤ 4: 1+1+2+3+5
        assert_eq!(Partition::enumerate_by_size(4).len(), 12);
    }
}
