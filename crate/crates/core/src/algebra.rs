//! Lie algebras given by structure constants in a fixed basis, elements as
//! coordinate vectors, and the derived and lower central series.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LieError, Result};
use crate::linalg::{format_scalar, int, is_zero_vec, parse_scalar, unit_vec, zero_vec, Matrix, Scalar};
use crate::subspace::Subspace;

/// An element of an algebra: its coordinate vector in the algebra's basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element(Vec<Scalar>);

impl Element {
    pub fn new(coords: Vec<Scalar>) -> Element {
        Element(coords)
    }

    pub fn zero(dim: usize) -> Element {
        Element(zero_vec(dim))
    }

    /// The `i`-th basis vector.
    pub fn basis(dim: usize, i: usize) -> Element {
        Element(unit_vec(dim, i))
    }

    pub fn from_ints(coords: &[i64]) -> Element {
        Element(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.0)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element(self.0.iter().map(|x| x * c).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &Element) -> Element {
        assert_eq!(self.len(), other.len(), "element length mismatch");
        Element(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_scalar).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.len(), rhs.len(), "element length mismatch");
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.len(), rhs.len(), "element length mismatch");
        Element(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element(self.0.iter().map(|a| -a).collect())
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(format_scalar))
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        raw.iter()
            .map(|s| parse_scalar(s))
            .collect::<Result<Vec<_>>>()
            .map(Element)
            .map_err(serde::de::Error::custom)
    }
}

/// A finite-dimensional Lie algebra over the rationals, stored as a dense
/// table `c[i][j][k]` with `[b_i, b_j] = sum_k c[i][j][k] b_k`.
///
/// Construction always validates antisymmetry and the Jacobi identity, so
/// every value of this type is a genuine Lie algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    table: Vec<Scalar>,
    /// Nonzero entries of each basis bracket, indexed by `i * dim + j`.
    sparse: Vec<Vec<(usize, Scalar)>>,
    cartan: Option<Vec<usize>>,
    root_labels: BTreeMap<usize, String>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("dim", &self.dim())
            .field("labels", &self.labels)
            .field("cartan", &self.cartan)
            .finish()
    }
}

impl LieAlgebra {
    /// Builds and validates an algebra from a full structure table indexed
    /// as `table[(i * dim + j) * dim + k]`.
    pub fn from_table(
        labels: Vec<String>,
        table: Vec<Scalar>,
        cartan: Option<Vec<usize>>,
        root_labels: BTreeMap<usize, String>,
    ) -> Result<LieAlgebra> {
        let dim = labels.len();
        if dim == 0 {
            return Err(LieError::InvalidParameter("algebra dimension must be positive".into()));
        }
        if table.len() != dim * dim * dim {
            return Err(LieError::DimensionMismatch {
                expected: dim * dim * dim,
                got: table.len(),
            });
        }
        if let Some(c) = &cartan {
            if let Some(&bad) = c.iter().find(|&&i| i >= dim) {
                return Err(LieError::InvalidParameter(format!("cartan index {bad} out of range")));
            }
        }
        let sparse = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter_map(|k| {
                        let c = &table[ij * dim + k];
                        (!c.is_zero()).then(|| (k, c.clone()))
                    })
                    .collect()
            })
            .collect();
        let algebra = LieAlgebra {
            labels,
            table,
            sparse,
            cartan,
            root_labels,
        };
        algebra.check_antisymmetry()?;
        algebra.check_jacobi()?;
        Ok(algebra)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Basis indices of the designated Cartan subalgebra, if any.
    pub fn cartan_indices(&self) -> Option<&[usize]> {
        self.cartan.as_deref()
    }

    /// Root names for root-vector basis indices (populated by the sl(n) builder).
    pub fn root_labels(&self) -> &BTreeMap<usize, String> {
        &self.root_labels
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.table[(i * n + j) * n + k]
    }

    /// Nonzero `(k, c[i][j][k])` entries of `[b_i, b_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.sparse[i * self.dim() + j]
    }

    fn check_antisymmetry(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                let ok = (0..n).all(|k| {
                    let a = self.structure_constant(i, j, k);
                    let b = self.structure_constant(j, i, k);
                    (a + b).is_zero()
                });
                if !ok {
                    return Err(LieError::Antisymmetry { i, j });
                }
            }
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.dim();
        // With antisymmetry in place, strictly increasing triples cover every case.
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (bi, bj, bk) = (Element::basis(n, i), Element::basis(n, j), Element::basis(n, k));
                    let a = self.bracket_unchecked(&self.bracket_unchecked(&bi, &bj), &bk);
                    let b = self.bracket_unchecked(&self.bracket_unchecked(&bj, &bk), &bi);
                    let c = self.bracket_unchecked(&self.bracket_unchecked(&bk, &bi), &bj);
                    if !(&(&a + &b) + &c).is_zero() {
                        return Err(LieError::Jacobi { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_len(&self, x: &Element) -> Result<()> {
        if x.len() != self.dim() {
            return Err(LieError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// The Lie bracket `[x, y]`, extended bilinearly from the basis table.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Element, y: &Element) -> Element {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, xi) in x.coords().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let entries = self.basis_bracket(i, j);
                if entries.is_empty() {
                    continue;
                }
                let w = xi * yj;
                for (k, c) in entries {
                    out[*k] += &w * c;
                }
            }
        }
        Element(out)
    }

    /// Span of all brackets `[u, w]` with `u` in `a` and `w` in `b`.
    pub fn bracket_spaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let n = self.dim();
        let mut vectors = Vec::new();
        for u in a.basis_vectors() {
            let u = Element(u);
            for w in b.basis_vectors() {
                vectors.push(self.bracket_unchecked(&u, &Element(w)).0);
            }
        }
        Subspace::span(n, vectors)
    }

    /// `[L, L]`.
    pub fn commutator_subalgebra(&self) -> Subspace {
        let n = self.dim();
        let vectors = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| {
            let mut v = zero_vec(n);
            for (k, c) in self.basis_bracket(i, j) {
                v[*k] = c.clone();
            }
            v
        });
        Subspace::span(n, vectors)
    }

    /// Elements commuting with every vector of `s`.
    pub fn centralizer(&self, s: &Subspace) -> Subspace {
        let n = self.dim();
        // Rows: for each basis vector w of s and output coordinate k,
        // sum_i x_i [b_i, w]_k = 0.
        let mut rows = Vec::new();
        for w in s.basis_vectors() {
            let w = Element(w);
            let images: Vec<Element> = (0..n)
                .map(|i| self.bracket_unchecked(&Element::basis(n, i), &w))
                .collect();
            for k in 0..n {
                rows.push(images.iter().map(|img| img.coords()[k].clone()).collect());
            }
        }
        if rows.is_empty() {
            return Subspace::full(n);
        }
        Subspace::kernel_of(&Matrix::from_rows(rows, n))
    }

    /// `Z(L)`.
    pub fn center(&self) -> Subspace {
        self.centralizer(&Subspace::full(self.dim()))
    }

    /// `L^(0) = L`, `L^(k) = [L^(k-1), L^(k-1)]`, stopping at zero or at the
    /// first repeated term (which is not duplicated).
    pub fn derived_series(&self) -> Vec<Subspace> {
        self.series(|s| self.bracket_spaces(s, s))
    }

    /// `L^0 = L`, `L^k = [L^(k-1), L]`, with the same stopping rule.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim());
        self.series(|s| self.bracket_spaces(s, &full))
    }

    fn series(&self, step: impl Fn(&Subspace) -> Subspace) -> Vec<Subspace> {
        let mut terms = vec![Subspace::full(self.dim())];
        loop {
            let last = terms.last().expect("series is never empty");
            if last.is_zero() {
                break;
            }
            let next = step(last);
            if &next == last {
                break;
            }
            terms.push(next);
        }
        terms
    }

    /// Smallest `k` with `L^(k) = 0`, if the algebra is solvable.
    pub fn solvability_index(&self) -> Option<usize> {
        vanishing_index(&self.derived_series())
    }

    /// Smallest `k` with `L^k = 0`, if the algebra is nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        vanishing_index(&self.lower_central_series())
    }

    pub fn is_solvable(&self) -> (bool, Option<usize>) {
        let idx = self.solvability_index();
        (idx.is_some(), idx)
    }

    pub fn is_nilpotent(&self) -> (bool, Option<usize>) {
        let idx = self.nilpotency_index();
        (idx.is_some(), idx)
    }

    /// Matrix of `ad(x)`: column `j` holds the coordinates of `[x, b_j]`.
    pub fn ad(&self, x: &Element) -> Result<Matrix> {
        self.check_len(x)?;
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| self.bracket_unchecked(x, &Element::basis(n, j)).0)
            .collect();
        Ok(Matrix::from_cols(&cols, n))
    }

    /// Rebuilds the algebra with a different designated Cartan basis.
    pub fn with_cartan(&self, cartan: Option<Vec<usize>>) -> Result<LieAlgebra> {
        LieAlgebra::from_table(self.labels.clone(), self.table.clone(), cartan, self.root_labels.clone())
    }

    pub fn check_element(&self, x: &Element) -> Result<()> {
        self.check_len(x)
    }

    pub fn one_hot(&self, i: usize) -> Element {
        Element::basis(self.dim(), i)
    }

    pub(crate) fn table(&self) -> &[Scalar] {
        &self.table
    }
}

fn vanishing_index(series: &[Subspace]) -> Option<usize> {
    series
        .last()
        .filter(|s| s.is_zero())
        .map(|_| series.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_abelian, build_filiform, build_heisenberg, build_sl};

    #[test]
    fn heisenberg_brackets() {
        let l = build_heisenberg(1).unwrap();
        let (x, y, z) = (l.one_hot(0), l.one_hot(1), l.one_hot(2));
        assert_eq!(l.bracket(&x, &y).unwrap(), z);
        assert!(l.bracket(&x, &z).unwrap().is_zero());
        assert_eq!(l.bracket(&y, &x).unwrap(), -&z);
    }

    #[test]
    fn bracket_rejects_wrong_length() {
        let l = build_sl(2).unwrap();
        let err = l.bracket(&Element::zero(2), &Element::zero(3)).unwrap_err();
        assert!(err.to_string().contains("dimension mismatch"));
    }

    #[test]
    fn center_of_heisenberg_is_z() {
        let l = build_heisenberg(1).unwrap();
        let z = l.center();
        assert_eq!(z.dim(), 1);
        assert!(z.contains(l.one_hot(2).coords()));
    }

    #[test]
    fn series_dimensions() {
        let h = build_heisenberg(1).unwrap();
        let dims: Vec<usize> = h.lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 1, 0]);

        let a = build_abelian(4).unwrap();
        let dims: Vec<usize> = a.lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![4, 0]);

        let f = build_filiform(4).unwrap();
        let dims: Vec<usize> = f.lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![4, 2, 1, 0]);
        assert_eq!(f.nilpotency_index(), Some(3));
    }

    #[test]
    fn sl2_is_neither_solvable_nor_nilpotent() {
        let l = build_sl(2).unwrap();
        assert_eq!(l.is_nilpotent(), (false, None));
        assert_eq!(l.is_solvable(), (false, None));
        assert_eq!(l.derived_series().len(), 1);
    }

    #[test]
    fn antisymmetry_violation_is_rejected() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let mut table = zero_vec(8);
        // c[0][1][0] = 1 ([a,b] = a) with c[1][0][0] left at 0.
        table[2] = int(1);
        let err = LieAlgebra::from_table(labels, table, None, BTreeMap::new()).unwrap_err();
        assert_eq!(err, LieError::Antisymmetry { i: 0, j: 1 });
    }
}
