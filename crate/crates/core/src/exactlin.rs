//! Exact rational linear algebra.
//!
//! Everything downstream (invariance tests, orbit classification, Plücker
//! coordinates, Jacobian ranks) reduces to rank and containment questions over
//! `Q`, so this module provides dense rational matrices, reduced row echelon
//! forms, a canonical [`Subspace`] type and maximal minors.
//!
//! Conventions: matrices act on column vectors; a [`Subspace`] stores its basis
//! as the rows of a matrix in reduced row echelon form, so two subspaces are
//! equal exactly when their stored bases are equal.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q`; panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let err = || Error::ParseRational(s.to_string());
    match s.split_once('/') {
        None => BigInt::from_str(s)
            .map(Rat::from_integer)
            .map_err(|_| err()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(p, q))
        }
    }
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        RatMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from row vectors. An empty list gives a `0 x cols` matrix
    /// only through [`RatMatrix::from_rows_with_cols`]; here it yields `0 x 0`.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(rows, cols)
    }

    pub fn from_rows_with_cols(rows: Vec<Vec<Rat>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(RatMatrix {
            rows: nrows,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| rat(x)).collect())
            .collect();
        Self::from_rows(data).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &RatMatrix) -> Result<RatMatrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, s: &Rat) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(RatMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        Self::from_fn(idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> RatMatrix {
        Self::from_fn(self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    pub fn rank(&self) -> usize {
        echelon_form(self).1
    }

    /// Basis of the right null space `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (rref, rank) = echelon_form(self);
        let pivots = pivot_columns(&rref, rank);
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rref.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(determinant_of(self.row_vectors()))
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (rref, _) = echelon_form(&aug);
        for i in 0..n {
            if !rref.get(i, i).is_one() {
                return Err(Error::Singular);
            }
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(rref.select_cols(&cols))
    }

    fn check_same_shape(&self, other: &RatMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|r| self.row(r).iter().map(format_rat).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(d)?;
        if raw.entries.len() != raw.rows {
            return Err(D::Error::custom(format!(
                "expected {} rows, found {}",
                raw.rows,
                raw.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(raw.rows);
        for row in &raw.entries {
            let parsed: Result<Vec<Rat>> = row.iter().map(|s| parse_rat(s)).collect();
            rows.push(parsed.map_err(D::Error::custom)?);
        }
        RatMatrix::from_rows_with_cols(rows, raw.cols).map_err(D::Error::custom)
    }
}

/// Reduced row echelon form and rank. The result has the shape of `m`, with
/// the zero rows at the bottom.
pub fn echelon_form(m: &RatMatrix) -> (RatMatrix, usize) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a.get(r, c).is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                a.entries.swap(p * cols + j, rank * cols + j);
            }
        }
        let inv = a.get(rank, c).recip();
        for j in c..cols {
            let v = a.get(rank, j) * &inv;
            a.set(rank, j, v);
        }
        let pivot_row: Vec<Rat> = a.row(rank).to_vec();
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let factor = a.get(r, c).clone();
            if factor.is_zero() {
                continue;
            }
            for (j, p) in pivot_row.iter().enumerate().skip(c) {
                if !p.is_zero() {
                    let v = a.get(r, j) - &factor * p;
                    a.set(r, j, v);
                }
            }
        }
        rank += 1;
    }
    (a, rank)
}

fn pivot_columns(rref: &RatMatrix, rank: usize) -> Vec<usize> {
    (0..rank)
        .map(|r| {
            (0..rref.cols)
                .find(|&c| !rref.get(r, c).is_zero())
                .expect("nonzero echelon row")
        })
        .collect()
}

fn determinant_of(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in rest {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &piv;
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= p * &f;
            }
        }
    }
    det
}

/// All strictly increasing `k`-tuples from `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// All `cols x cols` minors of `m`, indexed by increasing row tuples in
/// lexicographic order.
pub fn maximal_minors(m: &RatMatrix) -> Result<Vec<Rat>> {
    if m.rows < m.cols {
        return Err(Error::TooFewRows {
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(combinations(m.rows, m.cols)
        .into_iter()
        .map(|rows| determinant_of(rows.iter().map(|&r| m.row(r).to_vec()).collect()))
        .collect())
}

/// A linear subspace of `Q^n` in canonical (reduced row echelon) form.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMatrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in Q^{}) {:?}",
            self.dim(),
            self.ambient_dim,
            self.basis
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Image,
    Preimage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceOps {
    pub sum: Subspace,
    pub intersection: Subspace,
    /// Whether the second argument lies in the first.
    pub contains: bool,
}

impl Subspace {
    /// Row space of `m`; the rows of `m` are vectors of `Q^{m.cols()}`.
    pub fn row_space(m: &RatMatrix) -> Self {
        let (rref, rank) = echelon_form(m);
        let idx: Vec<usize> = (0..rank).collect();
        Subspace {
            ambient_dim: m.cols,
            basis: rref.select_rows(&idx),
        }
    }

    pub fn span(ambient_dim: usize, vectors: &[Vec<Rat>]) -> Result<Self> {
        let m = RatMatrix::from_rows_with_cols(vectors.to_vec(), ambient_dim)?;
        Ok(Self::row_space(&m))
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RatMatrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RatMatrix::identity(ambient_dim),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let vectors: Vec<Vec<Rat>> = indices.iter().map(|&i| unit(ambient_dim, i)).collect();
        Self::span(ambient_dim, &vectors).expect("coordinate vectors have the ambient length")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> Vec<usize> {
        pivot_columns(&self.basis, self.basis.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains_vector(&self, v: &[Rat]) -> Result<bool> {
        self.check_len(v.len())?;
        // reduce v against the echelon basis
        let mut w = v.to_vec();
        for (r, p) in self.pivots().into_iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (j, b) in self.basis.row(r).iter().enumerate() {
                if !b.is_zero() {
                    w[j] -= &f * b;
                }
            }
        }
        Ok(w.iter().all(Zero::is_zero))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_len(other.ambient_dim)?;
        for v in other.basis_vectors() {
            if !self.contains_vector(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_len(other.ambient_dim)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// Intersection via the left kernel of the stacked bases: `x A = y B`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_len(other.ambient_dim)?;
        let a = self.dim();
        let stacked = self.basis.vstack(&other.basis.scale(&rat(-1)))?;
        let kernel = stacked.transpose().kernel();
        let vectors: Vec<Vec<Rat>> = kernel
            .iter()
            .map(|coeffs| combine(&coeffs[..a], &self.basis, self.ambient_dim))
            .collect();
        Self::span(self.ambient_dim, &vectors)
    }

    /// Rows spanning `{c : c . u = 0 for all u in self}`.
    pub fn annihilator(&self) -> RatMatrix {
        let kernel = self.basis.kernel();
        RatMatrix::from_rows_with_cols(kernel, self.ambient_dim).expect("kernel vector length")
    }

    /// `T(self)`.
    pub fn image(&self, t: &RatMatrix) -> Result<Subspace> {
        self.check_operator(t)?;
        Ok(Self::row_space(&self.basis.mul(&t.transpose())?))
    }

    /// `{v : T v ∈ self}`.
    pub fn preimage(&self, t: &RatMatrix) -> Result<Subspace> {
        self.check_operator(t)?;
        let ann = self.annihilator();
        let cond = ann.mul(t)?;
        let kernel = if cond.rows() == 0 {
            (0..self.ambient_dim)
                .map(|i| unit(self.ambient_dim, i))
                .collect()
        } else {
            cond.kernel()
        };
        Self::span(self.ambient_dim, &kernel)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            });
        }
        Ok(())
    }

    fn check_operator(&self, t: &RatMatrix) -> Result<()> {
        if !t.is_square() {
            return Err(Error::NotSquare {
                rows: t.rows(),
                cols: t.cols(),
            });
        }
        self.check_len(t.rows())
    }
}

pub fn subspace_ops(a: &Subspace, b: &Subspace) -> Result<SubspaceOps> {
    Ok(SubspaceOps {
        sum: a.sum(b)?,
        intersection: a.intersection(b)?,
        contains: a.contains(b)?,
    })
}

pub fn apply_operator(t: &RatMatrix, a: &Subspace, mode: Mode) -> Result<Subspace> {
    match mode {
        Mode::Image => a.image(t),
        Mode::Preimage => a.preimage(t),
    }
}

/// `serialize_with` helper writing rationals as `"p/q"` strings.
pub fn serialize_rats<S: serde::Serializer>(
    v: &[Rat],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rat))
}

pub fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

fn combine(coeffs: &[Rat], basis: &RatMatrix, n: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    for (r, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (j, b) in basis.row(r).iter().enumerate() {
            if !b.is_zero() {
                v[j] += c * b;
            }
        }
    }
    v
}

/// Sign of a nonzero rational, `0` for zero.
pub fn sign(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64(rows)
    }

    fn span(n: usize, vs: &[&[i64]]) -> Subspace {
        let vs: Vec<Vec<Rat>> = vs
            .iter()
            .map(|v| v.iter().map(|&x| rat(x)).collect())
            .collect();
        Subspace::span(n, &vs).unwrap()
    }

    #[test]
    fn echelon_examples() {
        let (r, k) = echelon_form(&RatMatrix::identity(2));
        assert_eq!((r, k), (RatMatrix::identity(2), 2));
        let (r, k) = echelon_form(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!((r, k), (m(&[&[1, 2], &[0, 0]]), 1));
        let (r, k) = echelon_form(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!((r, k), (RatMatrix::identity(2), 2));
    }

    #[test]
    fn subspace_examples() {
        let e1 = span(2, &[&[1, 0]]);
        let e2 = span(2, &[&[0, 1]]);
        let ops = subspace_ops(&e1, &e2).unwrap();
        assert_eq!(ops.sum, Subspace::full(2));
        assert_eq!(ops.intersection, Subspace::zero(2));
        assert!(!ops.contains);

        let ops = subspace_ops(&e1, &e1).unwrap();
        assert_eq!(ops.sum, e1);
        assert_eq!(ops.intersection, e1);
        assert!(ops.contains);

        let a = span(2, &[&[1, 1]]);
        let b = span(2, &[&[1, 0], &[0, 1]]);
        let ops = subspace_ops(&a, &b).unwrap();
        assert_eq!(ops.sum, b);
        assert_eq!(ops.intersection, a);
        assert!(b.contains(&a).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(matches!(
            subspace_ops(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn operator_examples() {
        let a = span(2, &[&[1, 0]]);
        let zero = RatMatrix::zeros(2, 2);
        assert_eq!(
            apply_operator(&zero, &a, Mode::Image).unwrap(),
            Subspace::zero(2)
        );
        let id = RatMatrix::identity(2);
        assert_eq!(apply_operator(&id, &a, Mode::Image).unwrap(), a);
        assert_eq!(apply_operator(&id, &a, Mode::Preimage).unwrap(), a);
        // T e2 = e1, T e1 = 0
        let shift = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            apply_operator(&shift, &a, Mode::Preimage).unwrap(),
            Subspace::full(2)
        );
        assert!(apply_operator(&RatMatrix::zeros(3, 3), &a, Mode::Image).is_err());
    }

    #[test]
    fn minors_examples() {
        assert_eq!(
            maximal_minors(&RatMatrix::identity(2)).unwrap(),
            vec![rat(1)]
        );
        let t = maximal_minors(&m(&[&[0, 1], &[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let expect: Vec<Rat> = [0, -1, 0, 0, 0, 1].iter().map(|&x| rat(x)).collect();
        assert_eq!(t, expect);
        let rep = maximal_minors(&m(&[&[1, 2], &[1, 2], &[3, 5]])).unwrap();
        assert!(rep[0].is_zero());
        assert!(maximal_minors(&m(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), rat(-4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&ratio(-2, 4)), "-1/2");
        assert_eq!(format_rat(&rat(7)), "7");
    }

    #[test]
    fn matrix_json_form() {
        let a = RatMatrix::from_rows(vec![vec![ratio(1, 2), rat(0)], vec![rat(-3), ratio(2, 3)]])
            .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(
            s,
            r#"{"rows":2,"cols":2,"entries":[["1/2","0"],["-3","2/3"]]}"#
        );
        let back: RatMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(
            serde_json::from_str::<RatMatrix>(r#"{"rows":1,"cols":2,"entries":[["1"]]}"#).is_err()
        );
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant().unwrap(), rat(1));
        assert_eq!(
            a.mul(&a.inverse().unwrap()).unwrap(),
            RatMatrix::identity(2)
        );
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
    }
}
