//! Dense matrices over a truncated ring, and the Hermitian subtype.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::ring::{ExtensionSpec, RingElem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    spec: ExtensionSpec,
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl Matrix {
    pub fn zeros(spec: ExtensionSpec, rows: usize, cols: usize) -> Self {
        Matrix { spec, rows, cols, data: vec![RingElem::ZERO; rows * cols] }
    }

    pub fn identity(spec: ExtensionSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn diagonal(spec: ExtensionSpec, diag: &[RingElem]) -> Self {
        let mut m = Matrix::zeros(spec, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(spec: ExtensionSpec, rows: Vec<Vec<RingElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let data: Vec<RingElem> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|e| !spec.contains(**e)) {
            return Err(Error::Config(format!("digits {bad:?} out of range for {spec}")));
        }
        Ok(Matrix { spec, rows: r, cols: c, data })
    }

    pub fn spec(&self) -> &ExtensionSpec {
        &self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> RingElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<RingElem>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[RingElem]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let r = &self.spec;
        let mut out = Matrix::zeros(self.spec, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = r.add(out.get(i, j), r.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.spec, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// `σ(Aᵗ)`.
    pub fn conj_transpose(&self) -> Matrix {
        let mut out = self.transpose();
        for e in &mut out.data {
            *e = self.spec.sigma(*e);
        }
        out
    }

    /// First position where `A = σ(Aᵗ)` fails or a diagonal `y`-digit is nonzero.
    pub fn hermitian_defect(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            if self.get(i, i).y != 0 {
                return Some((i, i));
            }
            for j in i..self.cols {
                if self.get(i, j) != self.spec.sigma(self.get(j, i)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `row_dst += c · row_src`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: RingElem) {
        let r = self.spec;
        for j in 0..self.cols {
            let v = r.add(self.get(dst, j), r.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// `col_dst += c · col_src`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: RingElem) {
        let r = self.spec;
        for i in 0..self.rows {
            let v = r.add(self.get(i, dst), r.mul(c, self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: RingElem) {
        for j in 0..self.cols {
            let v = self.spec.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: RingElem) {
        for i in 0..self.rows {
            let v = self.spec.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Entrywise reduction to a coarser truncation of the same extension.
    pub fn reduce_to(&self, target: &ExtensionSpec) -> Result<Matrix> {
        if !self.spec.same_extension(target) || target.trunc() > self.spec.trunc() {
            return Err(Error::SpecMismatch);
        }
        let data = self.data.iter().map(|&e| self.spec.reduce_to(e, target)).collect();
        Ok(Matrix { spec: *target, rows: self.rows, cols: self.cols, data })
    }

    /// Determinant by valuation-pivot elimination. Every row operation
    /// subtracts an exact multiple `f` with `f·pivot = entry`, so the result
    /// is exact in the truncated ring.
    pub fn determinant(&self) -> Result<RingElem> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let r = self.spec;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = r.one();
        for k in 0..n {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if let Some(v) = r.valuation(a.get(i, j)) {
                        if best.is_none_or(|(bv, _, _)| v < bv) {
                            best = Some((v, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else { return Ok(r.zero()) };
            if pi != k {
                a.swap_rows(pi, k);
                det = r.neg(det);
            }
            if pj != k {
                a.swap_cols(pj, k);
                det = r.neg(det);
            }
            let piv = a.get(k, k);
            for i in k + 1..n {
                let e = a.get(i, k);
                if e.is_zero() {
                    continue;
                }
                let f = r.div_exact(e, piv).expect("pivot has minimal valuation");
                a.add_row_multiple(i, k, r.neg(f));
            }
            det = r.mul(det, piv);
        }
        Ok(det)
    }

    /// Invertible over the truncated ring, i.e. the determinant is a unit.
    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_ok_and(|d| self.spec.is_unit(d))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_rows()).expect("ring elements serialize")
    }

    pub fn from_json(spec: ExtensionSpec, value: &serde_json::Value) -> Result<Matrix> {
        let rows: Vec<Vec<RingElem>> = serde_json::from_value(value.clone())?;
        Matrix::from_rows(spec, rows)
    }
}

/// Square matrix with `A = σ(Aᵗ)` and diagonal entries in the image of `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if let Some((row, col)) = m.hermitian_defect() {
            return Err(Error::NotHermitian { row, col });
        }
        Ok(HermitianMatrix(m))
    }

    /// Builds the matrix from its free digits: `diag[i]` is the `x`-digit of
    /// `A_ii`, `upper` lists `A_ij` for `i < j` in row-major order.
    pub fn from_free_entries(spec: ExtensionSpec, n: usize, diag: &[u64], upper: &[RingElem]) -> Self {
        debug_assert_eq!(diag.len(), n);
        debug_assert_eq!(upper.len(), n * n.saturating_sub(1) / 2);
        let mut m = Matrix::zeros(spec, n, n);
        let mut k = 0;
        for (i, &d) in diag.iter().enumerate().take(n) {
            m.set(i, i, RingElem { x: d % spec.modulus_x(), y: 0 });
            for j in i + 1..n {
                let e = upper[k];
                k += 1;
                m.set(i, j, e);
                m.set(j, i, spec.sigma(e));
            }
        }
        HermitianMatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn reduce_to(&self, target: &ExtensionSpec) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix(self.0.reduce_to(target)?))
    }

    /// `Y·A·σ(Yᵗ)`.
    pub fn congruence(&self, y: &Matrix) -> Result<HermitianMatrix> {
        let b = y.mul(&self.0)?.mul(&y.conj_transpose())?;
        HermitianMatrix::new(b)
    }
}

impl Deref for HermitianMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ExtensionKind;

    fn ram3() -> ExtensionSpec {
        ExtensionSpec::new(3, ExtensionKind::RamifiedOdd, 1, 4).unwrap()
    }

    #[test]
    fn hermitian_validation() {
        let r = ram3();
        let pi = r.uniformizer();
        let m = Matrix::from_rows(r, vec![vec![r.zero(), pi], vec![r.neg(pi), r.zero()]]).unwrap();
        assert!(HermitianMatrix::new(m).is_ok());
        let bad = Matrix::from_rows(r, vec![vec![r.zero(), pi], vec![pi, r.zero()]]).unwrap();
        assert!(matches!(HermitianMatrix::new(bad), Err(Error::NotHermitian { row: 0, col: 1 })));
        let bad_diag = Matrix::from_rows(r, vec![vec![pi]]).unwrap();
        assert!(HermitianMatrix::new(bad_diag).is_err());
    }

    #[test]
    fn determinant_small() {
        let r = ram3();
        let pi = r.uniformizer();
        // [[1, π], [π, 1]] has det 1 − π² = 1 − 3 = −2
        let m = Matrix::from_rows(r, vec![vec![r.one(), pi], vec![pi, r.one()]]).unwrap();
        assert_eq!(m.determinant().unwrap(), r.from_int(-2));
        let m = Matrix::from_rows(r, vec![vec![pi, r.one()], vec![r.zero(), pi]]).unwrap();
        assert_eq!(m.determinant().unwrap(), r.from_int(3));
        assert!(!m.is_unimodular());
        assert!(Matrix::identity(r, 3).is_unimodular());
    }

    #[test]
    fn json_round_trip() {
        let r = ram3();
        let m = Matrix::from_rows(r, vec![vec![r.elem(1, 2), r.elem(3, 0)]]).unwrap();
        let v = m.to_json();
        assert_eq!(v.to_string(), r#"[[{"x":1,"y":2},{"x":3,"y":0}]]"#);
        assert_eq!(Matrix::from_json(r, &v).unwrap(), m);
    }
}
