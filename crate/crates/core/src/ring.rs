//! Truncated rings of integers `O / π^M` of the quadratic extensions of `Q_p`.
//!
//! Every element is stored in two-digit form `x + θ·y` where `θ` is a root of
//! `θ² = sθ + t`. For the unramified kind `θ` lifts a generator of `F_{p²}` and
//! `π = p`; for the ramified kinds `θ` itself is the uniformizer. The digit
//! moduli are chosen so that the representation is bijective:
//!
//! | kind        | `x` modulus        | `y` modulus        |
//! |-------------|--------------------|--------------------|
//! | unramified  | `p^M`              | `p^M`              |
//! | ramified    | `p^⌈M/2⌉`          | `p^⌊M/2⌋`          |
//!
//! A ring is described by an [`ExtensionSpec`], which is `Copy` and carries
//! all moduli; elements ([`RingElem`]) are plain digit pairs and every
//! operation goes through the `ExtensionSpec`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExtensionKind {
    /// `Q_p(w)` with residue field `F_{p²}`.
    Unramified,
    /// `Q_p(√(p·u))` for odd `p`, `σ(π) = −π`.
    RamifiedOdd,
    /// `Q_2(√(2u))`, `σ(π) = −π`.
    Ramified2TypeI,
    /// `Q_2(√(1+2u))` with `π = 1 + √(1+2u)`, `σ(π) = 2 − π`.
    Ramified2TypeII,
}

impl ExtensionKind {
    pub const ALL: [ExtensionKind; 4] = [
        ExtensionKind::Unramified,
        ExtensionKind::RamifiedOdd,
        ExtensionKind::Ramified2TypeI,
        ExtensionKind::Ramified2TypeII,
    ];

    pub fn is_ramified(self) -> bool {
        !matches!(self, ExtensionKind::Unramified)
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            ExtensionKind::Unramified => "unram",
            ExtensionKind::RamifiedOdd => "ram-odd",
            ExtensionKind::Ramified2TypeI => "ram2-i",
            ExtensionKind::Ramified2TypeII => "ram2-ii",
        }
    }
}

impl fmt::Display for ExtensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for ExtensionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unram" | "unramified" => Ok(ExtensionKind::Unramified),
            "ram-odd" | "ramified-odd" => Ok(ExtensionKind::RamifiedOdd),
            "ram2-i" => Ok(ExtensionKind::Ramified2TypeI),
            "ram2-ii" => Ok(ExtensionKind::Ramified2TypeII),
            other => Err(Error::Config(format!("unknown extension kind `{other}`"))),
        }
    }
}

/// Element `x + θ·y` of a truncated ring. Digits are canonical residues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem {
    pub x: u64,
    pub y: u64,
}

impl RingElem {
    pub const ZERO: RingElem = RingElem { x: 0, y: 0 };

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionSpec {
    p: u64,
    kind: ExtensionKind,
    unit_param: i64,
    s: i64,
    t: i64,
    trunc: u32,
    mx: u32,
    my: u32,
    mod_x: u64,
    mod_y: u64,
    s_x: u64,
    t_x: u64,
    s_y: u64,
    /// Inverse of the unit `u = t / p` modulo `p^mx` (ramified kinds only).
    u_inv: u64,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn reduce_signed(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| reduce_signed(old_s, m))
}

/// `p`-adic valuation of a nonzero integer.
pub(crate) fn vp(mut v: u64, p: u64) -> u32 {
    debug_assert!(v != 0);
    let mut k = 0;
    while v.is_multiple_of(p) {
        v /= p;
        k += 1;
    }
    k
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    let v = p.checked_pow(e)?;
    (v < (1u64 << 62)).then_some(v)
}

fn is_square_mod(a: u64, p: u64) -> bool {
    (0..p).any(|z| mulmod(z, z, p) == a % p)
}

fn smallest_nonresidue(p: u64) -> u64 {
    (1..p).find(|&a| !is_square_mod(a, p)).expect("odd primes have non-residues")
}

impl ExtensionSpec {
    /// Validated ring `O/π^M` for the given prime, kind and unit parameter.
    ///
    /// The unit parameter selects `u` in `θ² = p·u` (ramified odd),
    /// `θ² = 2u` (type I) or `θ² = 2θ + 2u` (type II); it is ignored for the
    /// unramified kind, which uses `θ² = −θ + 1` at `p = 2` and
    /// `θ² = t` with `t` the least quadratic non-residue for odd `p`.
    pub fn new(p: u64, kind: ExtensionKind, unit_param: i64, trunc: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        let (s, t, unit) = match kind {
            ExtensionKind::Unramified => {
                if p == 2 {
                    (-1, 1, 1)
                } else {
                    (0, smallest_nonresidue(p) as i64, 1)
                }
            }
            ExtensionKind::RamifiedOdd => {
                if p == 2 {
                    return Err(Error::KindMismatch { p, kind });
                }
                if unit_param.rem_euclid(p as i64) == 0 {
                    return Err(Error::BadUnitParam(unit_param));
                }
                (0, p as i64 * unit_param, unit_param)
            }
            ExtensionKind::Ramified2TypeI | ExtensionKind::Ramified2TypeII => {
                if p != 2 {
                    return Err(Error::KindMismatch { p, kind });
                }
                if unit_param.rem_euclid(2) == 0 {
                    return Err(Error::BadUnitParam(unit_param));
                }
                let s = if kind == ExtensionKind::Ramified2TypeII { 2 } else { 0 };
                (s, 2 * unit_param, unit_param)
            }
        };
        if kind == ExtensionKind::Unramified {
            // x^2 - s x - t must have no root mod p.
            let has_root = (0..p).any(|z| {
                let v = z as i128 * z as i128 - s as i128 * z as i128 - t as i128;
                v.rem_euclid(p as i128) == 0
            });
            if has_root {
                return Err(Error::ReducibleQuadratic { p, s, t });
            }
        }
        let (mx, my) = if kind.is_ramified() { (trunc.div_ceil(2), trunc / 2) } else { (trunc, trunc) };
        let mod_x = checked_pow(p, mx).ok_or(Error::TruncationTooLarge(trunc))?;
        let mod_y = checked_pow(p, my).ok_or(Error::TruncationTooLarge(trunc))?;
        let u_inv = if kind.is_ramified() {
            inv_mod(reduce_signed(unit as i128, mod_x), mod_x).ok_or(Error::BadUnitParam(unit_param))?
        } else {
            0
        };
        Ok(ExtensionSpec {
            p,
            kind,
            unit_param: unit,
            s,
            t,
            trunc,
            mx,
            my,
            mod_x,
            mod_y,
            s_x: reduce_signed(s as i128, mod_x),
            t_x: reduce_signed(t as i128, mod_x),
            s_y: reduce_signed(s as i128, mod_y),
            u_inv,
        })
    }

    /// The same extension at another truncation level.
    pub fn with_truncation(&self, trunc: u32) -> Result<Self> {
        ExtensionSpec::new(self.p, self.kind, self.unit_param, trunc)
    }

    /// A ring whose residue field has `q` elements: ramified over `Q_p` when
    /// `q = p`, unramified when `q = p²`.
    pub fn for_residue_size(q: u64, trunc: u32) -> Result<Self> {
        if is_prime(q) {
            let kind = if q == 2 { ExtensionKind::Ramified2TypeI } else { ExtensionKind::RamifiedOdd };
            return ExtensionSpec::new(q, kind, 1, trunc);
        }
        let p = (2..q).find(|&p| p * p == q).filter(|&p| is_prime(p));
        match p {
            Some(p) => ExtensionSpec::new(p, ExtensionKind::Unramified, 1, trunc),
            None => Err(Error::Config(format!("{q} is neither p nor p^2"))),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn kind(&self) -> ExtensionKind {
        self.kind
    }
    pub fn unit_param(&self) -> i64 {
        self.unit_param
    }
    pub fn s(&self) -> i64 {
        self.s
    }
    pub fn t(&self) -> i64 {
        self.t
    }
    pub fn trunc(&self) -> u32 {
        self.trunc
    }
    pub fn mx(&self) -> u32 {
        self.mx
    }
    pub fn my(&self) -> u32 {
        self.my
    }
    pub fn modulus_x(&self) -> u64 {
        self.mod_x
    }
    pub fn modulus_y(&self) -> u64 {
        self.mod_y
    }

    /// Residue field size.
    pub fn q(&self) -> u64 {
        if self.kind.is_ramified() {
            self.p
        } else {
            self.p * self.p
        }
    }

    /// Number of elements of the truncated ring.
    pub fn order(&self) -> u64 {
        self.mod_x * self.mod_y
    }

    /// True when both specs describe the same extension (truncation may differ).
    pub fn same_extension(&self, other: &ExtensionSpec) -> bool {
        self.p == other.p && self.kind == other.kind && self.s == other.s && self.t == other.t
    }

    pub fn contains(&self, a: RingElem) -> bool {
        a.x < self.mod_x && a.y < self.mod_y
    }

    pub fn elem(&self, x: i64, y: i64) -> RingElem {
        RingElem { x: reduce_signed(x as i128, self.mod_x), y: reduce_signed(y as i128, self.mod_y) }
    }

    pub fn zero(&self) -> RingElem {
        RingElem::ZERO
    }

    pub fn one(&self) -> RingElem {
        self.elem(1, 0)
    }

    pub fn from_int(&self, v: i64) -> RingElem {
        self.elem(v, 0)
    }

    /// The generator `θ` (equal to `π` for the ramified kinds).
    pub fn theta(&self) -> RingElem {
        self.elem(0, 1)
    }

    pub fn uniformizer(&self) -> RingElem {
        if self.kind.is_ramified() {
            self.theta()
        } else {
            self.from_int(self.p as i64)
        }
    }

    pub fn pi_pow(&self, k: u32) -> RingElem {
        let pi = self.uniformizer();
        (0..k).fold(self.one(), |acc, _| self.mul(acc, pi))
    }

    /// Element index in `0..order()`, handy for enumeration.
    pub fn index_of(&self, a: RingElem) -> u64 {
        a.x + self.mod_x * a.y
    }

    pub fn elem_at(&self, idx: u64) -> RingElem {
        RingElem { x: idx % self.mod_x, y: idx / self.mod_x }
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> + '_ {
        (0..self.order()).map(|i| self.elem_at(i))
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem { x: (a.x + b.x) % self.mod_x, y: (a.y + b.y) % self.mod_y }
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        RingElem { x: (self.mod_x - a.x) % self.mod_x, y: (self.mod_y - a.y) % self.mod_y }
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    /// `(x₁+θy₁)(x₂+θy₂) = (x₁x₂ + t·y₁y₂) + θ(x₁y₂ + x₂y₁ + s·y₁y₂)`.
    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        let (mx, my) = (self.mod_x, self.mod_y);
        let yy_x = mulmod(a.y, b.y, mx);
        let x = (mulmod(a.x, b.x, mx) + mulmod(self.t_x, yy_x, mx)) % mx;
        let yy_y = mulmod(a.y, b.y, my);
        let y = (mulmod(a.x % my, b.y, my) + mulmod(b.x % my, a.y, my) + mulmod(self.s_y, yy_y, my)) % my;
        RingElem { x, y }
    }

    /// Multiplication by a rational integer.
    pub fn scale(&self, a: RingElem, k: i64) -> RingElem {
        let kx = reduce_signed(k as i128, self.mod_x);
        let ky = reduce_signed(k as i128, self.mod_y);
        RingElem { x: mulmod(a.x, kx, self.mod_x), y: mulmod(a.y, ky, self.mod_y) }
    }

    /// Galois conjugation `σ(x + θy) = (x + s·y) − θ·y`.
    pub fn sigma(&self, a: RingElem) -> RingElem {
        RingElem { x: (a.x + mulmod(self.s_x, a.y, self.mod_x)) % self.mod_x, y: (self.mod_y - a.y) % self.mod_y }
    }

    /// `N(a) = a·σ(a) = x² + s·xy − t·y²`, an element of `Z/p^mx`.
    pub fn norm(&self, a: RingElem) -> u64 {
        let m = self.mod_x;
        let xx = mulmod(a.x, a.x, m);
        let sxy = mulmod(self.s_x, mulmod(a.x, a.y, m), m);
        let tyy = mulmod(self.t_x, mulmod(a.y, a.y, m), m);
        (xx + sxy + m - tyy) % m
    }

    /// `π`-adic valuation, `None` for zero (meaning "at least M").
    pub fn valuation(&self, a: RingElem) -> Option<u32> {
        let p = self.p;
        let vx = (a.x != 0).then(|| vp(a.x, p));
        let vy = (a.y != 0).then(|| vp(a.y, p));
        if self.kind.is_ramified() {
            let cx = vx.map(|v| 2 * v);
            let cy = vy.map(|v| 1 + 2 * v);
            match (cx, cy) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }
        } else {
            match (vx, vy) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }
        }
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        self.valuation(a) == Some(0)
    }

    /// Inverse of a unit through the norm: `a⁻¹ = σ(a) / N(a)`.
    pub fn invert_unit(&self, a: RingElem) -> Result<RingElem> {
        let n = self.norm(a);
        if n.is_multiple_of(self.p) {
            return Err(Error::NotUnit);
        }
        let n_inv = inv_mod(n, self.mod_x).ok_or(Error::NotUnit)?;
        let conj = self.sigma(a);
        Ok(RingElem { x: mulmod(conj.x, n_inv, self.mod_x), y: mulmod(conj.y, n_inv % self.mod_y.max(1), self.mod_y) })
    }

    /// Modulus of the values returned by [`trace_map`](Self::trace_map).
    pub fn trace_modulus(&self) -> u64 {
        match self.kind {
            ExtensionKind::Ramified2TypeII => self.mod_y.min(self.mod_x),
            _ => self.mod_x,
        }
    }

    /// `Tr(a) = a + σ(a) = 2x + s·y` (unramified), `T(x+πy) = x` (σ(π) = −π)
    /// or `T(x+πy) = x + y` (type II). Ramified kinds satisfy
    /// `a + σ(a) = 2·T(a)`.
    pub fn trace_map(&self, a: RingElem) -> u64 {
        let m = self.trace_modulus();
        match self.kind {
            ExtensionKind::Unramified => (2 * a.x + mulmod(self.s_x, a.y, m)) % m,
            ExtensionKind::RamifiedOdd | ExtensionKind::Ramified2TypeI => a.x % m,
            ExtensionKind::Ramified2TypeII => (a.x + a.y) % m,
        }
    }

    /// One division by `π`; requires `valuation(a) ≥ 1`. The quotient is
    /// determined modulo `π^(M−1)`; the returned lift `g` satisfies `π·g = a`
    /// exactly.
    fn div_pi(&self, a: RingElem) -> Option<RingElem> {
        let p = self.p;
        if self.kind.is_ramified() {
            if !a.x.is_multiple_of(p) {
                return None;
            }
            // π⁻¹ = (π − s)/t and t = p·u.
            let xq = a.x / p;
            let gy = mulmod(xq, self.u_inv % self.mod_x, self.mod_x) % self.mod_y;
            let sgy = mulmod(self.s_x, gy, self.mod_x);
            let gx = (a.y % self.mod_x + self.mod_x - sgy) % self.mod_x;
            Some(RingElem { x: gx, y: gy })
        } else {
            if !a.x.is_multiple_of(p) || !a.y.is_multiple_of(p) {
                return None;
            }
            Some(RingElem { x: a.x / p, y: a.y / p })
        }
    }

    /// Some `g` with `π^k·g = a`, or `None` if `valuation(a) < k`.
    pub fn div_pi_pow(&self, a: RingElem, k: u32) -> Option<RingElem> {
        if k >= self.trunc {
            return a.is_zero().then_some(RingElem::ZERO);
        }
        let mut g = a;
        for _ in 0..k {
            g = self.div_pi(g)?;
        }
        Some(g)
    }

    /// Some `f` with `f·d = a` exactly, provided `valuation(a) ≥ valuation(d)`.
    pub fn div_exact(&self, a: RingElem, d: RingElem) -> Option<RingElem> {
        let v = self.valuation(d)?;
        let d_unit = self.div_pi_pow(d, v)?;
        let a_red = self.div_pi_pow(a, v)?;
        let inv = self.invert_unit(d_unit).ok()?;
        Some(self.mul(a_red, inv))
    }

    /// Image of `a` (an element of this ring) in `target`, a coarser
    /// truncation of the same extension.
    pub fn reduce_to(&self, a: RingElem, target: &ExtensionSpec) -> RingElem {
        debug_assert!(self.same_extension(target) && target.trunc <= self.trunc);
        RingElem { x: a.x % target.mod_x, y: a.y % target.mod_y }
    }

    /// Canonical text form `x+θ*y mod (p,kind,M)`.
    pub fn format_elem(&self, a: RingElem) -> String {
        format!("{}+θ*{} mod ({},{},{})", a.x, a.y, self.p, self.kind, self.trunc)
    }

    /// Parses the canonical text form, checking the ring matches.
    pub fn parse_elem(&self, text: &str) -> Result<RingElem> {
        let bad = || Error::Config(format!("malformed element `{text}`"));
        let (value, ring) = text.split_once(" mod ").ok_or_else(bad)?;
        let (x, y) = value.split_once("+θ*").ok_or_else(bad)?;
        let ring = ring.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = ring.split(',').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let p: u64 = parts[0].parse().map_err(|_| bad())?;
        let kind: ExtensionKind = parts[1].parse()?;
        let m: u32 = parts[2].parse().map_err(|_| bad())?;
        if p != self.p || kind != self.kind || m != self.trunc {
            return Err(Error::SpecMismatch);
        }
        let x: i64 = x.parse().map_err(|_| bad())?;
        let y: i64 = y.parse().map_err(|_| bad())?;
        Ok(self.elem(x, y))
    }
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O/π^{} over Q_{} ({}, θ² = {}θ + {})", self.trunc, self.p, self.kind, self.s, self.t)
    }
}
