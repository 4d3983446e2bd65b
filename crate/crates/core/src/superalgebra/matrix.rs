use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Chart, Parity, SuperFunction};
use crate::error::{Error, Result};
use crate::scalar::ScalarExpr;

/// Dense matrix over scalar expressions, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ScalarExpr>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            rows,
            cols,
            data: vec![ScalarExpr::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ScalarMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ScalarExpr::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<ScalarExpr>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<ScalarExpr> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged matrix");
        ScalarMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: ScalarExpr) {
        self.data[i * self.cols + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &ScalarMatrix) -> Result<ScalarMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = ScalarMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ScalarExpr::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Row echelon reduction; returns the pivot columns and the product of
    /// pivots with the sign of the row swaps.
    fn eliminate(&mut self, aug: Option<&mut ScalarMatrix>) -> Result<(Vec<usize>, ScalarExpr)> {
        let mut aug = aug;
        let mut pivots = Vec::new();
        let mut det = ScalarExpr::one();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                self.swap_rows(p, row);
                if let Some(a) = aug.as_deref_mut() {
                    a.swap_rows(p, row);
                }
                det = -det;
            }
            let pv = self.get(row, col).clone();
            det = &det * &pv;
            let inv = pv.recip()?;
            self.scale_row(row, &inv);
            if let Some(a) = aug.as_deref_mut() {
                a.scale_row(row, &inv);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                self.axpy_row(r, row, &f);
                if let Some(a) = aug.as_deref_mut() {
                    a.axpy_row(r, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok((pivots, det))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, k: &ScalarExpr) {
        for j in 0..self.cols {
            let v = k * self.get(r, j);
            self.set(r, j, v);
        }
    }

    /// row[r] -= f * row[src]
    fn axpy_row(&mut self, r: usize, src: usize, f: &ScalarExpr) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(r, j) - &(f * s);
            self.set(r, j, v);
        }
    }

    pub fn rank(&self) -> Result<usize> {
        let mut m = self.clone();
        Ok(m.eliminate(None)?.0.len())
    }

    pub fn determinant(&self) -> Result<ScalarExpr> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        let (piv, det) = m.eliminate(None)?;
        Ok(if piv.len() == self.rows {
            det
        } else {
            ScalarExpr::zero()
        })
    }

    pub fn inverse(&self) -> Result<ScalarMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        let mut aug = ScalarMatrix::identity(self.rows);
        let (piv, _) = m.eliminate(Some(&mut aug))?;
        if piv.len() < self.rows {
            return Err(Error::SingularBody);
        }
        Ok(aug)
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let mut out = ScalarMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn eval_f64(&self, env: &dyn Fn(&str) -> Option<f64>) -> Option<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self.get(i, j).eval_f64(env)?);
            }
            out.push(row);
        }
        Some(out)
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

/// Matrix of superfunctions with row and column parities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    cs: Chart,
    rows: usize,
    cols: usize,
    entries: Vec<SuperFunction>,
    row_parities: Vec<Parity>,
    col_parities: Vec<Parity>,
}

impl GradedMatrix {
    pub fn zeros(cs: &Chart, row_parities: Vec<Parity>, col_parities: Vec<Parity>) -> Self {
        let rows = row_parities.len();
        let cols = col_parities.len();
        GradedMatrix {
            cs: cs.clone(),
            rows,
            cols,
            entries: vec![SuperFunction::zero(cs); rows * cols],
            row_parities,
            col_parities,
        }
    }

    pub fn identity(cs: &Chart, parities: Vec<Parity>) -> Self {
        let mut m = GradedMatrix::zeros(cs, parities.clone(), parities);
        for i in 0..m.rows {
            m.set(i, i, SuperFunction::one(cs));
        }
        m
    }

    pub fn from_rows(
        cs: &Chart,
        rows: Vec<Vec<SuperFunction>>,
        row_parities: Vec<Parity>,
        col_parities: Vec<Parity>,
    ) -> Result<Self> {
        let mut m = GradedMatrix::zeros(cs, row_parities, col_parities);
        if rows.len() != m.rows {
            return Err(Error::DimensionMismatch {
                expected: m.rows,
                found: rows.len(),
            });
        }
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != m.cols {
                return Err(Error::DimensionMismatch {
                    expected: m.cols,
                    found: r.len(),
                });
            }
            for (j, e) in r.into_iter().enumerate() {
                cs.ensure_same(e.chart())?;
                m.set(i, j, e);
            }
        }
        Ok(m)
    }

    pub fn chart(&self) -> &Chart {
        &self.cs
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_parities(&self) -> &[Parity] {
        &self.row_parities
    }

    pub fn col_parities(&self) -> &[Parity] {
        &self.col_parities
    }

    pub fn get(&self, i: usize, j: usize) -> &SuperFunction {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: SuperFunction) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Entry parities are consistent with the row and column grading.
    pub fn is_even(&self) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                self.get(i, j)
                    .is_homogeneous_of(self.row_parities[i] + self.col_parities[j])
            })
        })
    }

    pub fn body(&self) -> ScalarMatrix {
        let mut b = ScalarMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                b.set(i, j, self.get(i, j).body());
            }
        }
        b
    }

    pub fn from_body(cs: &Chart, b: &ScalarMatrix, row_parities: Vec<Parity>, col_parities: Vec<Parity>) -> Self {
        let mut m = GradedMatrix::zeros(cs, row_parities, col_parities);
        for i in 0..m.rows {
            for j in 0..m.cols {
                m.set(i, j, SuperFunction::from_scalar_unchecked(cs, b.get(i, j).clone()));
            }
        }
        m
    }

    pub fn mul(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        self.cs.ensure_same(&other.cs)?;
        let mut out = GradedMatrix::zeros(&self.cs, self.row_parities.clone(), other.col_parities.clone());
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = SuperFunction::zero(&self.cs);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = e.checked_sub(o)?;
        }
        Ok(out)
    }

    fn map(&self, f: impl Fn(&SuperFunction) -> SuperFunction) -> GradedMatrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = f(e);
        }
        out
    }

    /// A⁻¹ = Σ_k (−B⁻¹N)^k B⁻¹ with B the body and N the nilpotent rest.
    pub fn invert(&self) -> Result<GradedMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let b = self.body();
        let binv = b.inverse()?;
        let binv = GradedMatrix::from_body(&self.cs, &binv, self.col_parities.clone(), self.row_parities.clone());
        let nil = self.map(|e| e.soul());
        let step = binv.mul(&nil)?.map(|e| -e);
        let mut term = binv.clone();
        let mut acc = binv;
        for _ in 0..self.cs.odd_count() {
            term = step.mul(&term)?;
            if term.is_zero() {
                break;
            }
            for (a, t) in acc.entries.iter_mut().zip(&term.entries) {
                *a = &*a + t;
            }
        }
        Ok(acc)
    }

    pub fn body_rank(&self) -> Result<usize> {
        self.body().rank()
    }

    pub fn transpose(&self) -> GradedMatrix {
        let mut out = GradedMatrix::zeros(&self.cs, self.col_parities.clone(), self.row_parities.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}
