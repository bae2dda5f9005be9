//! Invertible Hermitian matrices over `F_{p²}` and symmetric matrices over `F_p`,
//! counted by full enumeration with Leibniz determinants.

use serde::{Deserialize, Serialize};

use super::{Budget, OracleCount};
use crate::error::Result;
use crate::ring::{ExtensionKind, ExtensionSpec, RingElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixField {
    /// `H_n(F_{p²})`.
    Hermitian,
    /// Symmetric matrices over `F_p`.
    Symmetric,
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], odd: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), odd));
            return;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            // inversions contributed by placing v after the current prefix
            let inv = prefix.iter().filter(|&&u| u > v).count();
            used[v] = true;
            prefix.push(v);
            rec(prefix, used, odd ^ (inv % 2 == 1), out);
            prefix.pop();
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], false, &mut out);
    out
}

fn leibniz(r: &ExtensionSpec, m: &[RingElem], n: usize, perms: &[(Vec<usize>, bool)]) -> RingElem {
    let mut det = r.zero();
    for (perm, odd) in perms {
        let term = perm.iter().enumerate().fold(r.one(), |acc, (i, &j)| r.mul(acc, m[i * n + j]));
        det = if *odd { r.sub(det, term) } else { r.add(det, term) };
    }
    det
}

/// Number of invertible `n × n` matrices of the given shape.
pub fn brute_force_invertible_count(n: usize, p: u64, field: MatrixField, budget: Budget) -> Result<OracleCount> {
    let r = match field {
        MatrixField::Hermitian => ExtensionSpec::new(p, ExtensionKind::Unramified, 0, 1)?,
        // F_p as O/π for a ramified O; only y = 0 elements are used
        MatrixField::Symmetric => {
            let kind = if p == 2 { ExtensionKind::Ramified2TypeI } else { ExtensionKind::RamifiedOdd };
            ExtensionSpec::new(p, kind, 1, 1)?
        }
    };
    let diag_choices = p as u128;
    let off_choices = match field {
        MatrixField::Hermitian => (p * p) as u128,
        MatrixField::Symmetric => p as u128,
    };
    let off = n * n.saturating_sub(1) / 2;
    let total = diag_choices.pow(n as u32) * off_choices.pow(off as u32);
    budget.check(total)?;
    let perms = permutations(n);
    let digits: Vec<u128> = std::iter::repeat_n(diag_choices, n).chain(std::iter::repeat_n(off_choices, off)).collect();
    let mut count: u128 = 0;
    let mut m = vec![RingElem::ZERO; n * n];
    for code in 0..total {
        let mut c = code;
        let mut vals = Vec::with_capacity(digits.len());
        for &d in &digits {
            vals.push((c % d) as u64);
            c /= d;
        }
        let mut k = n;
        for i in 0..n {
            m[i * n + i] = r.from_int(vals[i] as i64);
            for j in i + 1..n {
                let e = r.elem_at(vals[k]);
                k += 1;
                m[i * n + j] = e;
                m[j * n + i] = r.sigma(e);
            }
        }
        if !leibniz(&r, &m, n, &perms).is_zero() {
            count += 1;
        }
    }
    Ok(OracleCount { count, work: total })
}
