//! Root-space decomposition relative to a designated Cartan subalgebra,
//! strongly regular elements, and the element `q`, the sum of all root
//! vectors.
//!
//! Joint eigenspaces are found by refining `L` successively by each
//! `ad(h_i)`: on every current block the restricted operator's
//! characteristic polynomial must split over `Q`, and the block must be the
//! direct sum of the resulting eigenspaces. Inputs that are not split fail
//! with [`LieError::NotSplit`] rather than being approximated.

use std::collections::HashSet;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{Element, LieAlgebra};
use crate::error::{LieError, Result};
use crate::linalg::{int, rational_roots, serde_scalars, Matrix, Scalar};
use crate::subspace::Subspace;

/// A root `alpha` with its root vector `e_alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Root {
    /// `alpha(h_i)` for each Cartan basis vector `h_i`.
    #[serde(with = "serde_scalars")]
    pub values: Vec<Scalar>,
    /// Root vector, normalized so its first nonzero coordinate is 1.
    pub vector: Element,
    /// Basis index of the root vector when it is a basis vector.
    pub vector_index: Option<usize>,
    /// Coefficients of `alpha` in the simple roots.
    pub simple_coefficients: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.values.iter().find(|v| !v.is_zero()).is_some_and(Signed::is_positive)
    }

    /// `alpha(h)` for `h = sum_i c_i h_i`.
    pub fn eval(&self, cartan_coords: &[Scalar]) -> Scalar {
        crate::linalg::dot(&self.values, cartan_coords)
    }
}

/// Roots, a base, a strongly regular element `d` and `q = sum_alpha e_alpha`.
#[derive(Clone, Debug, Serialize)]
pub struct RootDatum {
    #[serde(skip)]
    pub cartan: Subspace,
    pub cartan_basis: Vec<Element>,
    pub roots: Vec<Root>,
    /// Indices into `roots` of the positive roots.
    pub positive: Vec<usize>,
    /// Indices into `roots` of the simple roots, in root order.
    pub simple: Vec<usize>,
    pub d: Element,
    /// Coefficients of `d` on the Cartan basis.
    pub d_coefficients: Vec<u64>,
    pub q: Element,
}

impl RootDatum {
    pub fn rank(&self) -> usize {
        self.cartan_basis.len()
    }

    /// Index of the root with the given values.
    pub fn find_root(&self, values: &[Scalar]) -> Option<usize> {
        self.roots.iter().position(|r| r.values == values)
    }

    /// Index of the root whose root vector is the given basis vector.
    pub fn root_at_basis_index(&self, index: usize) -> Option<usize> {
        self.roots.iter().position(|r| r.vector_index == Some(index))
    }
}

/// Cartan basis vectors designated by the algebra (builders set these).
pub fn designated_cartan(l: &LieAlgebra) -> Result<Vec<Element>> {
    let idx = l
        .cartan_indices()
        .ok_or_else(|| LieError::InvalidParameter("algebra has no designated cartan subalgebra".into()))?;
    Ok(idx.iter().map(|&i| l.one_hot(i)).collect())
}

/// Root decomposition relative to the algebra's designated Cartan basis.
pub fn root_datum(l: &LieAlgebra) -> Result<RootDatum> {
    root_decomposition(l, &designated_cartan(l)?)
}

pub fn root_decomposition(l: &LieAlgebra, cartan_basis: &[Element]) -> Result<RootDatum> {
    let n = l.dim();
    for h in cartan_basis {
        l.check_element(h)?;
    }
    let cartan = Subspace::span(n, cartan_basis.iter().map(|h| h.coords().to_vec()));
    if cartan.dim() != cartan_basis.len() || cartan_basis.is_empty() {
        return Err(LieError::InvalidParameter("cartan basis must be nonempty and linearly independent".into()));
    }
    for (a, ha) in cartan_basis.iter().enumerate() {
        for hb in &cartan_basis[a + 1..] {
            if !l.bracket(ha, hb)?.is_zero() {
                return Err(LieError::CartanNotAbelian);
            }
        }
    }
    if l.centralizer(&cartan) != cartan {
        return Err(LieError::CartanNotSelfCentralizing);
    }

    let ads: Vec<Matrix> = cartan_basis.iter().map(|h| l.ad(h)).collect::<Result<_>>()?;
    let blocks = joint_eigenspaces(n, &ads)?;

    let mut roots = Vec::new();
    for (space, weight) in blocks {
        if weight.iter().all(Zero::is_zero) {
            if space != cartan {
                return Err(LieError::NotSplit);
            }
            continue;
        }
        if space.dim() != 1 {
            return Err(LieError::NotSplit);
        }
        let vector = space.basis().row(0).to_vec();
        let support: Vec<usize> = (0..n).filter(|&i| !vector[i].is_zero()).collect();
        roots.push(Root {
            values: weight,
            vector_index: (support.len() == 1).then(|| support[0]),
            vector: Element::new(vector),
            simple_coefficients: Vec::new(),
        });
    }
    if roots.is_empty() {
        return Err(LieError::InvalidParameter("no roots relative to this cartan subalgebra".into()));
    }
    roots.sort_by_key(|r| first_nonzero(r.vector.coords()));

    // Defining check: ad(h_i) e_alpha = alpha(h_i) e_alpha.
    for r in &roots {
        for (ad, v) in ads.iter().zip(&r.values) {
            if ad.mul_vec(r.vector.coords()) != r.vector.scale(v).into_coords() {
                return Err(LieError::NotSplit);
            }
        }
    }
    let value_set: HashSet<&Vec<Scalar>> = roots.iter().map(|r| &r.values).collect();
    for r in &roots {
        let neg: Vec<Scalar> = r.values.iter().map(|v| -v).collect();
        if !value_set.contains(&neg) {
            return Err(LieError::InvalidParameter("roots are not closed under negation".into()));
        }
    }

    let positive: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].is_positive()).collect();
    let sums: HashSet<Vec<Scalar>> = positive
        .iter()
        .flat_map(|&a| positive.iter().map(move |&b| (a, b)))
        .map(|(a, b)| roots[a].values.iter().zip(&roots[b].values).map(|(x, y)| x + y).collect())
        .collect();
    let simple: Vec<usize> = positive.iter().copied().filter(|&i| !sums.contains(&roots[i].values)).collect();

    let rank = cartan_basis.len();
    let simple_cols: Vec<Vec<Scalar>> = simple.iter().map(|&i| roots[i].values.clone()).collect();
    let simple_matrix = Matrix::from_cols(&simple_cols, rank);
    if simple_matrix.rank() != simple.len() {
        return Err(LieError::InvalidParameter("simple roots are linearly dependent".into()));
    }
    for r in roots.iter_mut() {
        let coeffs = simple_matrix
            .solve(&r.values)
            .ok_or_else(|| LieError::InvalidParameter("root outside the span of the simple roots".into()))?;
        let ints: Option<Vec<i64>> = coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer().to_i64()).flatten())
            .collect();
        let ints = ints.ok_or_else(|| LieError::InvalidParameter("root is not an integral combination of simple roots".into()))?;
        let same_sign = ints.iter().all(|&c| c >= 0) || ints.iter().all(|&c| c <= 0);
        if !same_sign {
            return Err(LieError::InvalidParameter("simple-root coefficients of a root have mixed signs".into()));
        }
        r.simple_coefficients = ints;
    }

    let (d, d_coefficients) = find_strongly_regular(cartan_basis, &roots)?;
    let q = roots
        .iter()
        .fold(Element::zero(n), |acc, r| &acc + &r.vector);
    Ok(RootDatum {
        cartan,
        cartan_basis: cartan_basis.to_vec(),
        roots,
        positive,
        simple,
        d,
        d_coefficients,
        q,
    })
}

fn first_nonzero(v: &[Scalar]) -> usize {
    v.iter().position(|x| !x.is_zero()).unwrap_or(v.len())
}

/// Simultaneous eigenspaces of commuting operators, each paired with its
/// weight vector (one eigenvalue per operator).
fn joint_eigenspaces(n: usize, ops: &[Matrix]) -> Result<Vec<(Subspace, Vec<Scalar>)>> {
    let mut blocks = vec![(Subspace::full(n), Vec::new())];
    for op in ops {
        let mut refined = Vec::new();
        for (space, weight) in blocks {
            let basis = space.basis_vectors();
            let m = basis.len();
            // Restriction of `op` to `space` in the echelon basis.
            let mut cols = Vec::with_capacity(m);
            for b in &basis {
                let image = op.mul_vec(b);
                cols.push(space.coordinates(&image).ok_or(LieError::NotSplit)?);
            }
            let restricted = Matrix::from_cols(&cols, m);
            let (eigen, leftover) = rational_roots(&restricted.charpoly());
            if leftover > 0 {
                return Err(LieError::NotSplit);
            }
            let mut total = 0;
            for (lambda, _) in eigen {
                let shifted = restricted.sub(&Matrix::identity(m).scale(&lambda));
                let kernel = shifted.kernel();
                total += kernel.len();
                let ambient = kernel.into_iter().map(|k| {
                    let mut v = vec![Scalar::zero(); n];
                    for (c, b) in k.iter().zip(&basis) {
                        for (x, y) in v.iter_mut().zip(b) {
                            *x += c * y;
                        }
                    }
                    v
                });
                let mut w = weight.clone();
                w.push(lambda);
                refined.push((Subspace::span(n, ambient), w));
            }
            if total != m {
                // Not diagonalizable on this block.
                return Err(LieError::NotSplit);
            }
        }
        blocks = refined;
    }
    Ok(blocks)
}

/// Smallest-coefficient `d = sum c_i h_i` (`c_i` nonnegative integers) with
/// `alpha(d)` pairwise distinct over all roots.
///
/// Candidates are visited by increasing maximum coefficient, and
/// lexicographically among tuples sharing that maximum.
pub fn find_strongly_regular(cartan_basis: &[Element], roots: &[Root]) -> Result<(Element, Vec<u64>)> {
    let rank = cartan_basis.len();
    let n = cartan_basis.first().map_or(0, Element::len);
    let bound = 64 * (roots.len() as u64).pow(2);
    for max in 0..=bound {
        let mut tuple = vec![0u64; rank];
        loop {
            if tuple.iter().copied().max().unwrap_or(0) == max && separates(&tuple, roots) {
                let d = tuple
                    .iter()
                    .zip(cartan_basis)
                    .fold(Element::zero(n), |acc, (&c, h)| acc.add_scaled(&int(c as i64), h));
                return Ok((d, tuple));
            }
            if !advance(&mut tuple, max) {
                break;
            }
        }
    }
    Err(LieError::StronglyRegularSearchExhausted)
}

/// Next tuple of `{0..=max}^len` in lexicographic order; false when exhausted.
fn advance(tuple: &mut [u64], max: u64) -> bool {
    for pos in (0..tuple.len()).rev() {
        if tuple[pos] < max {
            tuple[pos] += 1;
            tuple[pos + 1..].iter_mut().for_each(|c| *c = 0);
            return true;
        }
    }
    false
}

fn separates(coeffs: &[u64], roots: &[Root]) -> bool {
    let c: Vec<Scalar> = coeffs.iter().map(|&x| int(x as i64)).collect();
    let mut seen = HashSet::new();
    roots.iter().all(|r| seen.insert(r.eval(&c)))
}

/// True iff the kernel of `ad(d)` is exactly `cartan`.
pub fn is_regular_semisimple(l: &LieAlgebra, d: &Element, cartan: &Subspace) -> Result<bool> {
    Ok(Subspace::kernel_of(&l.ad(d)?) == *cartan)
}

/// Values `alpha(d)` for each root, where `d` lies in the Cartan subspace.
pub fn root_values_at(datum: &RootDatum, d: &Element) -> Option<Vec<Scalar>> {
    let coords = cartan_coordinates(datum, d)?;
    Some(datum.roots.iter().map(|r| r.eval(&coords)).collect())
}

/// Coordinates of `h` on the ordered Cartan basis, if `h` lies in the Cartan subspace.
pub fn cartan_coordinates(datum: &RootDatum, h: &Element) -> Option<Vec<Scalar>> {
    let cols: Vec<Vec<Scalar>> = datum.cartan_basis.iter().map(|b| b.coords().to_vec()).collect();
    Matrix::from_cols(&cols, h.len()).solve(h.coords())
}
