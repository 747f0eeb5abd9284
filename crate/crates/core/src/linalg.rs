//! Dense exact linear algebra over the rationals.
//!
//! Everything here is exact: elimination is Gauss-Jordan over
//! [`Scalar`], characteristic polynomials use the Faddeev-LeVerrier
//! recurrence (valid in characteristic zero), and eigenvalues are only
//! ever extracted as rational roots.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{LieError, Result};

/// Exact rational scalar. Always kept in reduced form with positive denominator.
pub type Scalar = BigRational;

/// Integer as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `p/q` as a scalar. Panics on a zero denominator.
pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad_scalar(s))?;
            let q: BigInt = q.trim().parse().map_err(|_| bad_scalar(s))?;
            if q.is_zero() {
                return Err(LieError::Parse(format!("zero denominator in scalar {s:?}")));
            }
            Scalar::new(p, q)
        }
        None => Scalar::from_integer(t.parse().map_err(|_| bad_scalar(s))?),
    };
    Ok(parsed)
}

fn bad_scalar(s: &str) -> LieError {
    LieError::Parse(format!("invalid scalar {s:?}"))
}

/// Reduced-fraction string, `"p"` when the denominator is one.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn zero_vec(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Row-major dense matrix of scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_scalar).collect())
            .collect();
        write!(f, "Matrix{rows:?}")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must share a length.
    /// `cols` is only consulted when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let cols = rows.first().map_or(cols, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Scalar>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
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

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                if !m[(r, j)].is_zero() {
                    m[(r, j)] *= &inv;
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] -= delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = unit_vec(self.cols, free);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, free)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(LieError::Singular);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LieError::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Coefficients `c_0, ..., c_n` (lowest degree first) of `det(xI - M)`.
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert!(self.is_square(), "charpoly of non-square matrix");
        let n = self.rows;
        let mut coeffs = zero_vec(n + 1);
        coeffs[n] = Scalar::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m);
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let t = self.mul(&m).trace();
            coeffs[n - k] = -t / int(k as i64);
        }
        coeffs
    }
}

/// Horner evaluation, coefficients lowest degree first.
pub fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
}

/// Rational roots of a polynomial with rational coefficients (lowest
/// degree first), with multiplicities, in order of discovery.
///
/// The second component is the degree of the factor left over once every
/// rational root is divided out; zero means the polynomial splits over Q.
pub fn rational_roots(coeffs: &[Scalar]) -> (Vec<(Scalar, usize)>, usize) {
    let mut roots: Vec<(Scalar, usize)> = Vec::new();
    let push = |r: Scalar, roots: &mut Vec<(Scalar, usize)>| match roots.iter_mut().find(|(x, _)| *x == r) {
        Some(entry) => entry.1 += 1,
        None => roots.push((r, 1)),
    };

    let mut poly: Vec<Scalar> = coeffs.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let zeros = poly.iter().take_while(|c| c.is_zero()).count();
    if zeros == poly.len() {
        // Zero polynomial: nothing meaningful to report.
        return (roots, 0);
    }
    for _ in 0..zeros {
        push(Scalar::zero(), &mut roots);
    }
    let denom_lcm = poly[zeros..]
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = poly[zeros..]
        .iter()
        .map(|c| (c * Scalar::from_integer(denom_lcm.clone())).to_integer())
        .collect();

    let mut p = BigInt::one();
    while ints.len() > 1 {
        let a0 = ints[0].abs();
        if p > a0 {
            break;
        }
        if !(&a0 % &p).is_zero() {
            p += 1;
            continue;
        }
        let mut found = false;
        for q in divisors(&ints[ints.len() - 1].abs()) {
            if !p.gcd(&q).is_one() {
                continue;
            }
            for num in [p.clone(), -p.clone()] {
                let r = Scalar::new(num.clone(), q.clone());
                let rational: Vec<Scalar> = ints.iter().map(|c| Scalar::from_integer(c.clone())).collect();
                if eval_poly(&rational, &r).is_zero() {
                    ints = deflate(&ints, &num, &q);
                    push(r, &mut roots);
                    found = true;
                    break;
                }
            }
            if found {
                break;
            }
        }
        if !found {
            p += 1;
        }
    }
    (roots, ints.len() - 1)
}

/// Divides an integer polynomial by `(q x - p)`, which must be a factor.
fn deflate(ints: &[BigInt], p: &BigInt, q: &BigInt) -> Vec<BigInt> {
    // Synthetic division from the top: a_n x^n + ... = (q x - p)(b_{n-1} x^{n-1} + ...).
    let n = ints.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut carry = ints[n].clone();
    for k in (0..n).rev() {
        let b = carry.div_floor(q);
        debug_assert!((&b * q) == carry, "non-exact deflation");
        out[k] = b.clone();
        carry = &ints[k] + &b * p;
    }
    debug_assert!(carry.is_zero(), "deflation remainder");
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            let other = n / &d;
            if other != d {
                large.push(other);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Serde adapter for a single scalar as a fraction string.
pub mod serde_scalar {
    use super::{format_scalar, parse_scalar, Scalar};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let raw = String::deserialize(d)?;
        parse_scalar(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for scalar vectors as arrays of fraction strings.
pub mod serde_scalars {
    use super::{format_scalar, parse_scalar, Scalar};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(format_scalar))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|x| parse_scalar(x))
            .collect::<crate::error::Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for matrices as arrays of rows of fraction strings.
pub mod serde_matrix {
    use super::{format_scalar, parse_scalar, Matrix};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(format_scalar).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        let width = raw.first().map_or(0, Vec::len);
        if raw.iter().any(|r| r.len() != width) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let rows = raw
            .iter()
            .map(|r| r.iter().map(|x| parse_scalar(x)).collect::<crate::error::Result<Vec<_>>>())
            .collect::<crate::error::Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Matrix::from_rows(rows, width))
    }
}
