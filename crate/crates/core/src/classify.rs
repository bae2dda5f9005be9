//! Hermitian congruence normal forms: `Y·A·σ(Yᵗ)` diagonal when `O/Z_p` is
//! unramified, block diagonal with rank-1 cells and 2×2 cells
//! `A(a, b, c) = [[a, c], [σ(c), b]]` when it is ramified.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, Matrix};
use crate::ring::{ExtensionSpec, RingElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KindTag {
    Unramified,
    Ramified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cell", rename_all = "snake_case")]
pub enum Cell {
    /// `unit · p^exponent`.
    Diagonal {
        unit: RingElem,
        exponent: u32,
    },
    /// `[[a, c], [σ(c), b]]`.
    Block {
        a: RingElem,
        b: RingElem,
        c: RingElem,
    },
    Zero,
}

impl Cell {
    pub fn size(&self) -> usize {
        match self {
            Cell::Block { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub kind_tag: KindTag,
    /// Cells in diagonal order; zero cells come last.
    pub cells: Vec<Cell>,
}

impl CanonicalForm {
    pub fn diagonal_cells(&self) -> Vec<(RingElem, u32)> {
        self.cells
            .iter()
            .filter_map(|c| match *c {
                Cell::Diagonal { unit, exponent } => Some((unit, exponent)),
                _ => None,
            })
            .collect()
    }

    pub fn blocks(&self) -> Vec<(RingElem, RingElem, RingElem)> {
        self.cells
            .iter()
            .filter_map(|c| match *c {
                Cell::Block { a, b, c } => Some((a, b, c)),
                _ => None,
            })
            .collect()
    }

    pub fn zero_rank(&self) -> usize {
        self.cells.iter().filter(|c| matches!(c, Cell::Zero)).count()
    }

    pub fn dim(&self) -> usize {
        self.cells.iter().map(Cell::size).sum()
    }

    /// The block diagonal matrix the form stands for; fails if a diagonal
    /// entry is not fixed by `σ`.
    pub fn materialize(&self, spec: &ExtensionSpec) -> Result<HermitianMatrix> {
        let n = self.dim();
        let mut m = Matrix::zeros(*spec, n, n);
        let mut k = 0;
        for cell in &self.cells {
            match *cell {
                Cell::Diagonal { unit, exponent } => {
                    m.set(k, k, spec.mul(unit, p_pow(spec, exponent)));
                }
                Cell::Block { a, b, c } => {
                    m.set(k, k, a);
                    m.set(k + 1, k + 1, b);
                    m.set(k, k + 1, c);
                    m.set(k + 1, k, spec.sigma(c));
                }
                Cell::Zero => {}
            }
            k += cell.size();
        }
        HermitianMatrix::new(m)
    }

    /// Violations of the block shape: `c ≠ 0`, `a/c ∈ O` and `b/(πc) ∈ O`,
    /// and no blocks at all in the unramified case.
    pub fn shape_defect(&self, spec: &ExtensionSpec) -> Option<String> {
        for (a, b, c) in self.blocks() {
            if self.kind_tag == KindTag::Unramified {
                return Some("unramified form contains a block".into());
            }
            if c.is_zero() {
                return Some("block with c = 0".into());
            }
            if spec.div_exact(a, c).is_none() {
                return Some(format!("a/c ∉ O for a = {}, c = {}", spec.format_elem(a), spec.format_elem(c)));
            }
            let pic = spec.mul(spec.uniformizer(), c);
            let ok = if pic.is_zero() { b.is_zero() } else { spec.div_exact(b, pic).is_some() };
            if !ok {
                return Some(format!("b/(πc) ∉ O for b = {}, c = {}", spec.format_elem(b), spec.format_elem(c)));
            }
        }
        None
    }
}

fn p_pow(spec: &ExtensionSpec, k: u32) -> RingElem {
    let m = spec.modulus_x() as u128;
    let v = (spec.p() as u128).checked_pow(k).map_or(0, |v| v % m);
    RingElem { x: v as u64, y: 0 }
}

/// `a / p^k` digitwise, if both digits are divisible.
fn div_p_pow(spec: &ExtensionSpec, a: RingElem, k: u32) -> Option<RingElem> {
    let pk = spec.p().checked_pow(k)?;
    (a.x.is_multiple_of(pk) && a.y.is_multiple_of(pk)).then_some(RingElem { x: a.x / pk, y: a.y / pk })
}

/// Working state: `a = y · a₀ · σ(yᵗ)` throughout.
struct Reducer {
    spec: ExtensionSpec,
    a: Matrix,
    y: Matrix,
}

impl Reducer {
    /// `row_dst += c·row_src` followed by `col_dst += σ(c)·col_src`.
    fn add(&mut self, dst: usize, src: usize, c: RingElem) {
        if c.is_zero() {
            return;
        }
        self.a.add_row_multiple(dst, src, c);
        self.a.add_col_multiple(dst, src, self.spec.sigma(c));
        self.y.add_row_multiple(dst, src, c);
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.a.swap_cols(i, j);
        self.y.swap_rows(i, j);
    }

    fn val(&self, i: usize, j: usize) -> Option<u32> {
        self.spec.valuation(self.a.get(i, j))
    }

    /// A diagonal entry usable as a rank-1 pivot: `u·p^k` with `u` a unit.
    fn diagonal_cell(&self, i: usize) -> Option<(RingElem, u32)> {
        let v = self.val(i, i)?;
        let k = if self.spec.kind().is_ramified() {
            if v % 2 == 1 {
                return None;
            }
            v / 2
        } else {
            v
        };
        let u = div_p_pow(&self.spec, self.a.get(i, i), k)?;
        self.spec.is_unit(u).then_some((u, k))
    }

    /// Clears row and column `t` against the pivot `a[t][t]`.
    fn clear_rank_one(&mut self, t: usize) {
        let r = self.spec;
        let d = self.a.get(t, t);
        for k in t + 1..self.a.rows() {
            let e = self.a.get(k, t);
            if e.is_zero() {
                continue;
            }
            let f = r.div_exact(e, d).expect("pivot valuation is minimal");
            self.add(k, t, r.neg(f));
        }
    }

    /// Clears rows and columns `t, t+1` against the block with off-diagonal
    /// pivot `c = a[t][t+1]`, alternating between the two pivot rows. Each
    /// pass raises the valuation of what is left, since `v(b) > v(c)`.
    fn clear_block(&mut self, t: usize) -> Result<()> {
        let r = self.spec;
        let c = self.a.get(t, t + 1);
        let sc = self.a.get(t + 1, t);
        for k in t + 2..self.a.rows() {
            for _ in 0..=2 * r.trunc() + 2 {
                let ej = self.a.get(k, t + 1);
                if !ej.is_zero() {
                    let f = r.div_exact(ej, c).expect("pivot valuation is minimal");
                    self.add(k, t, r.neg(f));
                }
                let ei = self.a.get(k, t);
                if !ei.is_zero() {
                    let f = r.div_exact(ei, sc).expect("pivot valuation is minimal");
                    self.add(k, t + 1, r.neg(f));
                }
                if self.a.get(k, t).is_zero() && self.a.get(k, t + 1).is_zero() {
                    break;
                }
            }
            if !self.a.get(k, t).is_zero() || !self.a.get(k, t + 1).is_zero() {
                return Err(Error::Classification(format!("block clearing did not terminate in row {k}")));
            }
        }
        Ok(())
    }

    /// Tries `row_i += c·row_j` for `c ∈ {1, θ}` so that `a[i][i]` becomes a
    /// rank-1 pivot of valuation `v`.
    fn repair_diagonal(&mut self, i: usize, j: usize, v: u32) -> bool {
        for c in [self.spec.one(), self.spec.theta()] {
            let saved = (self.a.clone(), self.y.clone());
            self.add(i, j, c);
            let ok = self.diagonal_cell(i).is_some_and(|_| self.val(i, i) == Some(v));
            if ok {
                return true;
            }
            (self.a, self.y) = saved;
        }
        false
    }
}

/// Returns `Y` unimodular and a form with `Y·A·σ(Yᵗ)` equal to its
/// materialization at the working truncation.
pub fn classify(a: &HermitianMatrix) -> Result<(Matrix, CanonicalForm)> {
    let spec = *a.spec();
    let n = a.n();
    let ramified = spec.kind().is_ramified();
    let mut st = Reducer { spec, a: a.as_matrix().clone(), y: Matrix::identity(spec, n) };
    let mut cells = Vec::new();
    let mut t = 0;
    while t < n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..n {
            for j in i..n {
                if let Some(v) = st.val(i, j) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, _, _)) = best else {
            cells.extend(std::iter::repeat_n(Cell::Zero, n - t));
            break;
        };
        if let Some(i) = (t..n).find(|&i| st.val(i, i) == Some(v) && st.diagonal_cell(i).is_some()) {
            st.swap(t, i);
            st.clear_rank_one(t);
            let (unit, exponent) = st.diagonal_cell(t).expect("pivot checked");
            cells.push(Cell::Diagonal { unit, exponent });
            t += 1;
            continue;
        }
        let off = (t..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| st.val(i, j) == Some(v));
        let Some((i, j)) = off else {
            return Err(Error::Classification(format!(
                "residual valuation {v} is attained by no usable pivot at truncation {}",
                spec.trunc()
            )));
        };
        if st.repair_diagonal(i, j, v) {
            continue;
        }
        if !ramified {
            return Err(Error::Classification(format!("no diagonal pivot at valuation {v} in the unramified case")));
        }
        // the diagonal entry of higher valuation goes second
        let (i, j) = if st.val(i, i).unwrap_or(u32::MAX) <= st.val(j, j).unwrap_or(u32::MAX) { (i, j) } else { (j, i) };
        st.swap(t, i);
        st.swap(t + 1, if j == t { i } else { j });
        st.clear_block(t)?;
        let cell = Cell::Block { a: st.a.get(t, t), b: st.a.get(t + 1, t + 1), c: st.a.get(t, t + 1) };
        let form = CanonicalForm { kind_tag: KindTag::Ramified, cells: vec![cell] };
        if let Some(defect) = form.shape_defect(&spec) {
            return Err(Error::Classification(format!("residual valuation {v}: {defect}; raise the truncation")));
        }
        cells.push(cell);
        t += 2;
    }
    let kind_tag = if ramified { KindTag::Ramified } else { KindTag::Unramified };
    Ok((st.y, CanonicalForm { kind_tag, cells }))
}

/// `Y` is unimodular and `Y·A·σ(Yᵗ)` equals the materialized form exactly.
pub fn verify_congruence(a: &HermitianMatrix, y: &Matrix, form: &CanonicalForm) -> bool {
    if y.rows() != a.n() || y.cols() != a.n() || form.dim() != a.n() || !y.is_unimodular() {
        return false;
    }
    match a.congruence(y) {
        Ok(b) => form.materialize(a.spec()).is_ok_and(|m| m == b),
        Err(_) => false,
    }
}
