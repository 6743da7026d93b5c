//! Small dense matrices and vectors over Q_p.
//!
//! Dimensions stay in the single digits here, so the implementation favors
//! clarity over asymptotics. Pivots are chosen by minimal valuation to keep
//! as many tracked digits as possible.

use crate::error::{Error, Result};
use crate::padic::PAdic;

pub fn vec_add(a: &[PAdic], b: &[PAdic]) -> Result<Vec<PAdic>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[PAdic], b: &[PAdic]) -> Result<Vec<PAdic>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_neg(a: &[PAdic]) -> Vec<PAdic> {
    a.iter().map(|x| x.neg()).collect()
}

pub fn vec_scale(c: &PAdic, a: &[PAdic]) -> Result<Vec<PAdic>> {
    a.iter().map(|x| c.mul(x)).collect()
}

pub fn vec_eq(a: &[PAdic], b: &[PAdic]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.eq_approx(y))
}

pub fn vec_is_zero(a: &[PAdic]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Scales a vector with at least one nonzero entry so that the minimum
/// valuation becomes 0 (a primitive vector).
pub fn vec_primitive(a: &[PAdic]) -> Result<Vec<PAdic>> {
    let min_val = a
        .iter()
        .filter_map(|x| x.valuation())
        .min()
        .ok_or(Error::ZeroInput)?;
    Ok(a.iter().map(|x| x.shift(-min_val)).collect())
}

/// Greedily selects `want` linearly independent vectors from the candidates,
/// eliminating against earlier pivots with minimal-valuation pivoting.
pub fn select_independent(candidates: &[Vec<PAdic>], want: usize) -> Result<Vec<Vec<PAdic>>> {
    if want == 0 {
        return Ok(Vec::new());
    }
    let mut pivots: Vec<(usize, Vec<PAdic>)> = Vec::new();
    let mut chosen = Vec::new();
    for cand in candidates {
        let mut v = cand.clone();
        for (row, pvec) in &pivots {
            if !v[*row].is_zero() {
                let f = v[*row].div(&pvec[*row])?;
                v = vec_sub(&v, &vec_scale(&f, pvec)?)?;
            }
        }
        let pivot_row = (0..v.len())
            .filter(|&r| !v[r].is_zero())
            .min_by_key(|&r| v[r].valuation().expect("nonzero"));
        if let Some(row) = pivot_row {
            pivots.push((row, v));
            chosen.push(cand.clone());
            if chosen.len() == want {
                return Ok(chosen);
            }
        }
    }
    Err(Error::DegenerateConfiguration("could not select enough independent vectors"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<PAdic>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<PAdic>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(prime: u64, n: usize, prec: u32) -> Matrix {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(if i == j { PAdic::one(prime, prec) } else { PAdic::zero(prime) });
            }
        }
        Matrix { rows: n, cols: n, data }
    }

    pub fn zero(prime: u64, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![PAdic::zero(prime); rows * cols] }
    }

    pub fn diagonal(entries: &[PAdic], prime: u64) -> Matrix {
        let n = entries.len();
        let mut m = Matrix::zero(prime, n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[PAdic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<PAdic> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.prime_hint(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    fn prime_hint(&self) -> u64 {
        self.data.first().map_or(2, |x| x.prime())
    }

    /// Largest relative precision appearing among the entries; neutral
    /// constants are built at this precision so they never cap a result.
    pub fn work_prec(&self) -> u32 {
        self.data.iter().map(|x| x.rel_precision()).max().unwrap_or(0).max(1)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zero(self.prime_hint(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = PAdic::zero(self.prime_hint());
                for k in 0..self.cols {
                    acc = acc.add(&self[(i, k)].mul(&other[(k, j)])?)?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[PAdic]) -> Result<Vec<PAdic>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = PAdic::zero(self.prime_hint());
            for k in 0..self.cols {
                acc = acc.add(&self[(i, k)].mul(&v[k])?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: other.rows });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&Matrix { rows: other.rows, cols: other.cols, data: vec_neg(&other.data) })
    }

    pub fn eq_approx(&self, other: &Matrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && vec_eq(&self.data, &other.data)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if !self[(i, j)].eq_approx(&self[(j, i)]) {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by Gaussian elimination with minimal-valuation pivoting.
    pub fn det(&self) -> Result<PAdic> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let p = self.prime_hint();
        let mut m = self.clone();
        let mut det = PAdic::one(p, self.work_prec());
        for k in 0..n {
            let pivot = (k..n)
                .filter(|&i| !m[(i, k)].is_zero())
                .min_by_key(|&i| m[(i, k)].valuation().expect("nonzero"));
            let pivot = match pivot {
                Some(i) => i,
                None => return Ok(PAdic::zero_to(p, m.data.iter().map(|x| x.abs_precision()).min().unwrap_or(0))),
            };
            if pivot != k {
                for j in 0..n {
                    let tmp = m[(pivot, j)].clone();
                    m[(pivot, j)] = m[(k, j)].clone();
                    m[(k, j)] = tmp;
                }
                det = det.neg();
            }
            det = det.mul(&m[(k, k)])?;
            let inv = m[(k, k)].inv()?;
            for i in (k + 1)..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let factor = m[(i, k)].mul(&inv)?;
                for j in k..n {
                    let delta = factor.mul(&m[(k, j)])?;
                    m[(i, j)] = m[(i, j)].sub(&delta)?;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        let p = self.prime_hint();
        let mut m = self.clone();
        let mut inv = Matrix::identity(p, n, self.work_prec());
        for k in 0..n {
            let pivot = (k..n)
                .filter(|&i| !m[(i, k)].is_zero())
                .min_by_key(|&i| m[(i, k)].valuation().expect("nonzero"))
                .ok_or(Error::SingularMatrix)?;
            if pivot != k {
                for j in 0..n {
                    let tmp = m[(pivot, j)].clone();
                    m[(pivot, j)] = m[(k, j)].clone();
                    m[(k, j)] = tmp;
                    let tmp = inv[(pivot, j)].clone();
                    inv[(pivot, j)] = inv[(k, j)].clone();
                    inv[(k, j)] = tmp;
                }
            }
            let piv_inv = m[(k, k)].inv()?;
            for j in 0..n {
                m[(k, j)] = m[(k, j)].mul(&piv_inv)?;
                inv[(k, j)] = inv[(k, j)].mul(&piv_inv)?;
            }
            for i in 0..n {
                if i == k || m[(i, k)].is_zero() {
                    continue;
                }
                let factor = m[(i, k)].clone();
                for j in 0..n {
                    let dm = factor.mul(&m[(k, j)])?;
                    m[(i, j)] = m[(i, j)].sub(&dm)?;
                    let di = factor.mul(&inv[(k, j)])?;
                    inv[(i, j)] = inv[(i, j)].sub(&di)?;
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = PAdic;
    fn index(&self, (i, j): (usize, usize)) -> &PAdic {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut PAdic {
        &mut self.data[i * self.cols + j]
    }
}

/// Value of the bilinear form `x^T gram y`.
pub fn form_pair(gram: &Matrix, x: &[PAdic], y: &[PAdic]) -> Result<PAdic> {
    let gy = gram.mul_vec(y)?;
    if x.len() != gy.len() {
        return Err(Error::DimensionMismatch { expected: gy.len(), got: x.len() });
    }
    let p = gram[(0, 0)].prime();
    let mut acc = PAdic::zero(p);
    for (a, b) in x.iter().zip(&gy) {
        acc = acc.add(&a.mul(b)?)?;
    }
    Ok(acc)
}
