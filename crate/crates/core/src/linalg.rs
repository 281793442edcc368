//! Dense integer and rational matrices with exact arithmetic.
//!
//! Everything here is arbitrary precision. Determinants use fraction-free
//! (Bareiss) elimination so that every intermediate value is an integer;
//! inverses and ranks are computed over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebraic::RatPolynomial;
use crate::error::{dim_err, Error, Result};
use crate::literal::IntLit;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Dense row-major matrix of exact rationals, always in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

/// Integer row vector `k = (k_1, ..., k_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntRowVector(Vec<BigInt>);

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return dim_err("zero-dimensional matrices are not allowed");
        }
        if data.len() != rows * cols {
            return dim_err(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return dim_err("ragged rows");
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().cloned().map(Into::into))
            .collect();
        Self::new(rows.len(), cols, data)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity of dimension 0");
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        Self { rows: n, cols: n, data }
    }

    pub fn scalar(n: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut m = Self::identity(n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            dim_err(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            ))
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        let n = self.require_square("det")?;
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    // Sylvester's identity guarantees exact divisibility.
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return dim_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for t in 0..self.cols {
                    let a = self.get(i, t);
                    if !a.is_zero() {
                        acc += a * other.get(t, j);
                    }
                }
                data.push(acc);
            }
        }
        Ok(IntMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return dim_err("cannot add matrices of different shapes");
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// `self^exp` by repeated squaring; `exp = 0` gives the identity.
    pub fn pow(&self, mut exp: u64) -> Result<IntMatrix> {
        let n = self.require_square("pow")?;
        let mut result = IntMatrix::identity(n);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().cloned().map(BigRational::from_integer).collect(),
        }
    }

    /// Exact inverse over the rationals.
    pub fn inverse_rational(&self) -> Result<RatMatrix> {
        self.require_square("inverse")?;
        self.to_rational().inverse()
    }

    pub fn rank_rational(&self) -> usize {
        self.to_rational().rank()
    }

    /// `M x` for a column vector `x` with integer entries.
    pub fn apply_column(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return dim_err("column vector length does not match matrix");
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Characteristic polynomial `det(t I - A)`, monic, obtained by exact
    /// interpolation of integer determinants at `t = 0, ..., n`.
    pub fn char_poly(&self) -> Result<RatPolynomial> {
        let n = self.require_square("char_poly")?;
        let mut result = RatPolynomial::zero();
        let nodes: Vec<BigRational> =
            (0..=n).map(|t| BigRational::from_integer(BigInt::from(t))).collect();
        for (i, ti) in nodes.iter().enumerate() {
            let shifted = IntMatrix::scalar(n, ti.to_integer()).sub(self)?;
            let value = BigRational::from_integer(shifted.det()?);
            let mut basis = RatPolynomial::constant(value);
            for (j, tj) in nodes.iter().enumerate() {
                if i != j {
                    let factor = RatPolynomial::new(vec![-tj.clone(), BigRational::one()]);
                    basis = (&basis * &factor).scale(&(ti - tj).recip());
                }
            }
            result = &result + &basis;
        }
        Ok(result)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return dim_err("cannot subtract matrices of different shapes");
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Maximum over rows of the sum of absolute values of the entries.
    pub fn max_abs_row_sum(&self) -> BigInt {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<BigInt>())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>()
            }))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<IntLit>>::deserialize(d)?;
        let rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.0).collect())
            .collect();
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return dim_err("zero-dimensional matrices are not allowed");
        }
        if data.len() != rows * cols {
            return dim_err(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            ));
        }
        // BigRational keeps itself reduced with a positive denominator.
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return dim_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for t in 0..self.cols {
                    acc += self.get(i, t) * other.get(t, j);
                }
                data.push(acc);
            }
        }
        Ok(RatMatrix { rows: self.rows, cols: other.cols, data })
    }

    /// `M x` for a rational column vector.
    pub fn apply_column(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        if x.len() != self.cols {
            return dim_err("column vector length does not match matrix");
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Gauss-Jordan inverse over the rationals.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return dim_err("inverse needs a square matrix");
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    let t = &factor * &a[col][j];
                    a[r][j] -= t;
                    let t = &factor * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
        Ok(RatMatrix { rows: n, cols: n, data: inv.into_iter().flatten().collect() })
    }

    /// Rank over the rationals by row echelon reduction.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigRational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot);
            for r in rank + 1..self.rows {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &a[rank][col];
                for j in col..self.cols {
                    let t = &factor * &a[rank][j];
                    a[r][j] -= t;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>()
            }))
            .finish()
    }
}

impl IntRowVector {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return dim_err("row vectors need at least one entry");
        }
        Ok(Self(entries))
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        assert!(!entries.is_empty(), "empty row vector");
        Self(entries.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim > 0, "empty row vector");
        Self(vec![BigInt::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Row vector times matrix: `k M`.
    pub fn mul_matrix(&self, m: &IntMatrix) -> Result<IntRowVector> {
        if self.dim() != m.rows() {
            return dim_err(format!(
                "row vector of dim {} times {}x{} matrix",
                self.dim(),
                m.rows(),
                m.cols()
            ));
        }
        let out = (0..m.cols())
            .map(|j| {
                self.0
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| !k.is_zero())
                    .map(|(i, k)| k * m.get(i, j))
                    .sum()
            })
            .collect();
        Ok(IntRowVector(out))
    }

    pub fn add(&self, other: &IntRowVector) -> Result<IntRowVector> {
        if self.dim() != other.dim() {
            return dim_err("cannot add row vectors of different dims");
        }
        Ok(IntRowVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn neg(&self) -> IntRowVector {
        IntRowVector(self.0.iter().map(|v| -v).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntRowVector {
        IntRowVector(self.0.iter().map(|v| v * c).collect())
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(|v| v.abs()).max().unwrap_or_default()
    }
}

impl fmt::Debug for IntRowVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for IntRowVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntRowVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<IntLit>::deserialize(d)?;
        IntRowVector::new(v.into_iter().map(|x| x.0).collect()).map_err(serde::de::Error::custom)
    }
}

/// Stacks `n` row vectors of dimension `n` into a square matrix.
pub fn stack_rows(vectors: &[IntRowVector]) -> Result<IntMatrix> {
    let Some(first) = vectors.first() else {
        return dim_err("no rows to stack");
    };
    let dim = first.dim();
    if vectors.iter().any(|v| v.dim() != dim) {
        return dim_err("rows have mixed dimensions");
    }
    if vectors.len() != dim {
        return dim_err(format!("{} rows of dimension {dim} do not form a square", vectors.len()));
    }
    let data = vectors.iter().flat_map(|v| v.0.iter().cloned()).collect();
    IntMatrix::new(dim, dim, data)
}
