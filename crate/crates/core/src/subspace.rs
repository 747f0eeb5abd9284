//! Subspaces of `Q^n` held in canonical reduced row echelon form.

use num_traits::Zero;

use crate::linalg::{is_zero_vec, Matrix, Scalar};

/// A subspace of the coordinate space `Q^n`.
///
/// The basis is always the nonzero rows of the reduced row echelon form of
/// any spanning set, so two subspaces are equal exactly when their stored
/// bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors (which may be dependent).
    pub fn span<I>(ambient_dim: usize, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let rows: Vec<Vec<Scalar>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient_dim, "vector length mismatch"))
            .filter(|v| !is_zero_vec(v))
            .collect();
        if rows.is_empty() {
            return Subspace::zero(ambient_dim);
        }
        let (r, pivots) = Matrix::from_rows(rows, ambient_dim).rref();
        let basis = Matrix::from_rows((0..pivots.len()).map(|i| r.row(i).to_vec()).collect(), ambient_dim);
        Subspace {
            ambient_dim,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Kernel of a matrix acting on column vectors.
    pub fn kernel_of(m: &Matrix) -> Subspace {
        Subspace::span(m.cols(), m.kernel())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    /// Echelon basis, one row per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.to_rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, if `v` is a member.
    ///
    /// Because the basis is reduced, the candidate coordinates are just the
    /// entries of `v` at the pivot columns.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, i) in coords.iter().zip(0..) {
            if c.is_zero() {
                continue;
            }
            for (r, b) in residual.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *r -= c * b;
                }
            }
        }
        is_zero_vec(&residual).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.ambient_dim,
            self.basis_vectors().into_iter().chain(other.basis_vectors()),
        )
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient_dim);
        }
        // a·U = b·W  <=>  (a, -b) in the left kernel of [U; W].
        let mut cols: Vec<Vec<Scalar>> = self.basis_vectors();
        cols.extend(other.basis_vectors().into_iter().map(|v| v.into_iter().map(|x| -x).collect()));
        let stacked = Matrix::from_cols(&cols, self.ambient_dim);
        let vectors = stacked.kernel().into_iter().map(|k| {
            let a = &k[..self.dim()];
            let mut v = vec![Scalar::zero(); self.ambient_dim];
            for (c, i) in a.iter().zip(0..) {
                for (x, b) in v.iter_mut().zip(self.basis.row(i)) {
                    *x += c * b;
                }
            }
            v
        });
        Subspace::span(self.ambient_dim, vectors)
    }

    /// Standard basis indices completing the echelon basis to the whole
    /// space: the non-pivot columns, in increasing order.
    pub fn standard_complement(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|c| !self.pivots.contains(c)).collect()
    }
}
