//! Linear maps on an algebra: automorphism and derivation predicates, the
//! derivation-space solver, exponentials of nilpotent derivations, and
//! torus and inner automorphism families.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, LieAlgebra};
use crate::error::{LieError, Result};
use crate::linalg::{int, serde_matrix, Matrix, Scalar};
use crate::roots::RootDatum;
use crate::subspace::Subspace;

/// A linear map given by its matrix on coordinate vectors: column `j` is
/// the image of basis vector `b_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearMap {
    #[serde(with = "serde_matrix")]
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Result<LinearMap> {
        if !matrix.is_square() {
            return Err(LieError::InvalidParameter(format!(
                "linear map must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(LinearMap { matrix })
    }

    pub fn identity(n: usize) -> LinearMap {
        LinearMap {
            matrix: Matrix::identity(n),
        }
    }

    pub fn zero(n: usize) -> LinearMap {
        LinearMap {
            matrix: Matrix::zeros(n, n),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &Element) -> Element {
        Element::new(self.matrix.mul_vec(x.coords()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        Ok(LinearMap {
            matrix: self.matrix.inverse()?,
        })
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            matrix: self.matrix.scale(c),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.dim())
    }

    /// Smallest `k >= 1` with `self^k = 0`, searched up to the dimension.
    pub fn nilpotency_order(&self) -> Option<usize> {
        let n = self.dim();
        if n == 0 || self.matrix.is_zero() {
            return Some(1);
        }
        let mut power = self.matrix.clone();
        for k in 2..=n {
            power = power.mul(&self.matrix);
            if power.is_zero() {
                return Some(k);
            }
        }
        None
    }
}

/// Outcome of an automorphism or derivation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapReport {
    pub ok: bool,
    /// Always true for derivation reports, where invertibility is not required.
    pub invertible: bool,
    /// First basis pair `(i, j)`, `i < j`, where the defining identity fails.
    pub failing_pair: Option<(usize, usize)>,
}

fn check_dim(l: &LieAlgebra, a: &LinearMap) -> Result<()> {
    if a.dim() != l.dim() {
        return Err(LieError::DimensionMismatch {
            expected: l.dim(),
            got: a.dim(),
        });
    }
    Ok(())
}

fn bracket_image(l: &LieAlgebra, a: &LinearMap, i: usize, j: usize) -> Element {
    let mut v = vec![Scalar::zero(); l.dim()];
    for (k, c) in l.basis_bracket(i, j) {
        v[*k] = c.clone();
    }
    a.apply(&Element::new(v))
}

/// Checks invertibility and `A[b_i, b_j] = [A b_i, A b_j]` on all basis pairs.
pub fn is_automorphism(l: &LieAlgebra, a: &LinearMap) -> Result<MapReport> {
    check_dim(l, a)?;
    let n = l.dim();
    let invertible = a.matrix.rank() == n;
    let cols: Vec<Element> = (0..n).map(|j| Element::new(a.matrix.col(j))).collect();
    let failing_pair = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .find(|&(i, j)| bracket_image(l, a, i, j) != l.bracket_unchecked(&cols[i], &cols[j]));
    Ok(MapReport {
        ok: invertible && failing_pair.is_none(),
        invertible,
        failing_pair,
    })
}

/// Checks the Leibniz rule `D[b_i, b_j] = [D b_i, b_j] + [b_i, D b_j]` on all basis pairs.
pub fn is_derivation(l: &LieAlgebra, d: &LinearMap) -> Result<MapReport> {
    check_dim(l, d)?;
    let n = l.dim();
    let cols: Vec<Element> = (0..n).map(|j| Element::new(d.matrix.col(j))).collect();
    let failing_pair = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| {
        let lhs = bracket_image(l, d, i, j);
        let rhs = &l.bracket_unchecked(&cols[i], &l.one_hot(j)) + &l.bracket_unchecked(&l.one_hot(i), &cols[j]);
        lhs != rhs
    });
    Ok(MapReport {
        ok: failing_pair.is_none(),
        invertible: true,
        failing_pair,
    })
}

/// Basis of `Der(L)`, solved as the kernel of the Leibniz conditions in the
/// `dim^2` matrix entries (entry `(r, c)` is unknown `r * dim + c`).
pub fn derivation_space(l: &LieAlgebra) -> Vec<LinearMap> {
    let n = l.dim();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut row = vec![Scalar::zero(); n * n];
                // (D [b_i, b_j])_k = sum_m D[k][m] c_ij^m
                for (m, c) in l.basis_bracket(i, j) {
                    row[k * n + m] += c;
                }
                // ([D b_i, b_j])_k = sum_m D[m][i] c_mj^k
                for m in 0..n {
                    let c = l.structure_constant(m, j, k);
                    if !c.is_zero() {
                        row[m * n + i] -= c;
                    }
                    // ([b_i, D b_j])_k = sum_m D[m][j] c_im^k
                    let c = l.structure_constant(i, m, k);
                    if !c.is_zero() {
                        row[m * n + j] -= c;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..n * n).map(|t| crate::linalg::unit_vec(n * n, t)).collect()
    } else {
        Subspace::kernel_of(&Matrix::from_rows(rows, n * n)).basis_vectors()
    };
    kernel
        .into_iter()
        .map(|v| LinearMap {
            matrix: Matrix::from_rows(v.chunks(n).map(<[Scalar]>::to_vec).collect(), n),
        })
        .collect()
}

/// `exp(D) = sum_{k < m} D^k / k!` for a nilpotent derivation `D` with `D^m = 0`.
pub fn exp_nilpotent(l: &LieAlgebra, d: &LinearMap) -> Result<LinearMap> {
    let report = is_derivation(l, d)?;
    if !report.ok {
        return Err(LieError::NotDerivation(report.failing_pair));
    }
    let order = d.nilpotency_order().ok_or(LieError::NotNilpotent)?;
    let n = l.dim();
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..order {
        term = term.mul(d.matrix()).scale(&Scalar::new(One::one(), (k as i64).into()));
        sum = sum.add(&term);
    }
    let result = LinearMap { matrix: sum };
    let check = is_automorphism(l, &result)?;
    if !check.ok {
        return Err(LieError::NotAutomorphism(check.failing_pair));
    }
    Ok(result)
}

/// `exp(ad x)` for an ad-nilpotent element `x`.
pub fn inner_automorphism(l: &LieAlgebra, x: &Element) -> Result<LinearMap> {
    exp_nilpotent(l, &LinearMap::new(l.ad(x)?)?)
}

/// Torus scalars `c_alpha = prod_i c_i^{n_i}` for `alpha = sum_i n_i alpha_i`.
pub fn torus_scalars(datum: &RootDatum, c: &[Scalar]) -> Result<Vec<Scalar>> {
    if c.len() != datum.simple.len() {
        return Err(LieError::DimensionMismatch {
            expected: datum.simple.len(),
            got: c.len(),
        });
    }
    if let Some(i) = c.iter().position(Zero::is_zero) {
        return Err(LieError::ZeroTorusParameter(i));
    }
    Ok(datum
        .roots
        .iter()
        .map(|r| {
            r.simple_coefficients
                .iter()
                .zip(c)
                .fold(Scalar::one(), |acc, (&e, ci)| acc * ci.pow(e as i32))
        })
        .collect())
}

/// The map fixing the Cartan subalgebra pointwise and scaling each root
/// vector `e_alpha` by `c_alpha` (see [`torus_scalars`]).
pub fn torus_automorphism(l: &LieAlgebra, datum: &RootDatum, c: &[Scalar]) -> Result<LinearMap> {
    let scalars = torus_scalars(datum, c)?;
    let map = diagonal_in_root_basis(l, datum, &scalars)?;
    let check = is_automorphism(l, &map)?;
    if !check.ok {
        return Err(LieError::NotAutomorphism(check.failing_pair));
    }
    Ok(map)
}

/// The linear map acting as the identity on the Cartan basis and as
/// `e_alpha -> s_alpha e_alpha` on root vectors.
pub fn diagonal_in_root_basis(l: &LieAlgebra, datum: &RootDatum, scalars: &[Scalar]) -> Result<LinearMap> {
    let n = l.dim();
    let mut adapted: Vec<Vec<Scalar>> = datum.cartan_basis.iter().map(|h| h.coords().to_vec()).collect();
    adapted.extend(datum.roots.iter().map(|r| r.vector.coords().to_vec()));
    if adapted.len() != n {
        return Err(LieError::NotSplit);
    }
    let p = Matrix::from_cols(&adapted, n);
    let p_inv = p.inverse()?;
    let mut diag = Matrix::identity(n);
    for (t, s) in scalars.iter().enumerate() {
        diag[(datum.rank() + t, datum.rank() + t)] = s.clone();
    }
    LinearMap::new(p.mul(&diag).mul(&p_inv))
}

/// For `phi` fixing every Cartan basis vector and sending each `e_alpha` to a
/// nonzero multiple of itself, the multipliers `c_alpha` in root order.
/// `None` when `phi` does not have that form.
pub fn torus_form(datum: &RootDatum, phi: &LinearMap) -> Option<Vec<Scalar>> {
    if datum.cartan_basis.iter().any(|h| phi.apply(h) != *h) {
        return None;
    }
    datum
        .roots
        .iter()
        .map(|r| {
            let image = phi.apply(&r.vector);
            let pivot = r.vector.coords().iter().position(|x| !x.is_zero())?;
            let c = &image.coords()[pivot] / &r.vector.coords()[pivot];
            (!c.is_zero() && image == r.vector.scale(&c)).then_some(c)
        })
        .collect()
}

/// Outcome of the rigidity argument applied to a single automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rigidity {
    /// `phi(d) != d`: the argument does not apply.
    MovesD,
    /// `phi(d) = d` but `phi(q) != q`; carries the multipliers `c_alpha`.
    FixesDOnly(Vec<Scalar>),
    /// `phi(d) = d` and `phi(q) = q`, which forced every `c_alpha = 1` and `phi = id`.
    ForcedIdentity,
}

/// Runs the fixed-`d`, fixed-`q` argument: `phi(d) = d` puts `phi` in torus
/// form, and then `phi(q) = sum c_alpha e_alpha = q` forces `c_alpha = 1`.
///
/// Errors if `phi(d) = d` but `phi` is not in torus form, or if `phi(q) = q`
/// yet `phi` is not the identity; either would contradict the argument.
pub fn rigidity(datum: &RootDatum, phi: &LinearMap) -> Result<Rigidity> {
    if phi.apply(&datum.d) != datum.d {
        return Ok(Rigidity::MovesD);
    }
    let scalars = torus_form(datum, phi).ok_or_else(|| {
        LieError::InvalidParameter("automorphism fixes d but is not diagonal in the root basis".into())
    })?;
    if phi.apply(&datum.q) != datum.q {
        return Ok(Rigidity::FixesDOnly(scalars));
    }
    // phi(q) = sum_alpha c_alpha e_alpha; root vectors are independent, so
    // comparing with q = sum_alpha e_alpha reads off c_alpha = 1.
    if scalars.iter().any(|c| !c.is_one()) || !phi.is_identity() {
        return Err(LieError::InvalidParameter("phi fixes d and q but is not the identity".into()));
    }
    Ok(Rigidity::ForcedIdentity)
}

/// Scalar `t` as a map `t * id`.
pub fn scalar_map(n: usize, t: i64) -> LinearMap {
    LinearMap::identity(n).scale(&int(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_abelian, build_heisenberg, build_sl};
    use crate::linalg::frac;
    use crate::roots::root_datum;

    fn map(rows: &[&[i64]]) -> LinearMap {
        LinearMap::new(Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            0,
        ))
        .unwrap()
    }

    #[test]
    fn sl2_automorphism_examples() {
        let l = build_sl(2).unwrap();
        assert!(is_automorphism(&l, &LinearMap::identity(3)).unwrap().ok);
        // h -> -h, e <-> f
        let swap = map(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
        assert!(is_automorphism(&l, &swap).unwrap().ok);
        let doubling = scalar_map(3, 2);
        let report = is_automorphism(&l, &doubling).unwrap();
        assert!(!report.ok && report.invertible);
        assert_eq!(report.failing_pair, Some((0, 1)));
        assert!(!is_automorphism(&l, &LinearMap::zero(3)).unwrap().invertible);
    }

    #[test]
    fn derivation_examples() {
        let l = build_sl(2).unwrap();
        for i in 0..3 {
            let ad = LinearMap::new(l.ad(&l.one_hot(i)).unwrap()).unwrap();
            assert!(is_derivation(&l, &ad).unwrap().ok);
        }
        assert!(is_derivation(&l, &LinearMap::zero(3)).unwrap().ok);
        assert!(!is_derivation(&l, &LinearMap::identity(3)).unwrap().ok);
        assert!(is_derivation(&l, &LinearMap::identity(2)).is_err());
    }

    #[test]
    fn derivation_space_dimensions() {
        assert_eq!(derivation_space(&build_sl(2).unwrap()).len(), 3);
        assert_eq!(derivation_space(&build_abelian(3).unwrap()).len(), 9);
        let h = build_heisenberg(1).unwrap();
        let basis = derivation_space(&h);
        assert!(basis.iter().all(|d| is_derivation(&h, d).unwrap().ok));
    }

    #[test]
    fn exp_of_ad_e_on_sl2() {
        let l = build_sl(2).unwrap();
        let e = l.one_hot(1);
        let phi = inner_automorphism(&l, &e).unwrap();
        let phi_inv = inner_automorphism(&l, &-&e).unwrap();
        assert_eq!(phi.compose(&phi_inv), LinearMap::identity(3));
        // exp(ad e): h -> h - 2e, e -> e, f -> f + h - e.
        assert_eq!(phi, map(&[&[1, 0, 1], &[-2, 1, -1], &[0, 0, 1]]));
        assert_eq!(exp_nilpotent(&l, &LinearMap::zero(3)).unwrap(), LinearMap::identity(3));
    }

    #[test]
    fn exp_rejects_bad_inputs() {
        let l = build_sl(2).unwrap();
        let ad_h = LinearMap::new(l.ad(&l.one_hot(0)).unwrap()).unwrap();
        assert_eq!(exp_nilpotent(&l, &ad_h).unwrap_err(), LieError::NotNilpotent);
        assert!(matches!(
            exp_nilpotent(&l, &LinearMap::identity(3)),
            Err(LieError::NotDerivation(_))
        ));
    }

    #[test]
    fn square_zero_exponential_on_heisenberg() {
        let l = build_heisenberg(1).unwrap();
        // D(x) = z, D(y) = D(z) = 0
        let d = map(&[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]);
        assert_eq!(d.nilpotency_order(), Some(2));
        let phi = exp_nilpotent(&l, &d).unwrap();
        assert_eq!(phi, LinearMap::identity(3).add(&d));
    }

    #[test]
    fn torus_examples() {
        let sl2 = build_sl(2).unwrap();
        let datum = root_datum(&sl2).unwrap();
        assert_eq!(torus_automorphism(&sl2, &datum, &[int(1)]).unwrap(), LinearMap::identity(3));
        let t = torus_automorphism(&sl2, &datum, &[int(4)]).unwrap();
        assert_eq!(t.apply(&sl2.one_hot(1)), sl2.one_hot(1).scale(&int(4)));
        assert_eq!(t.apply(&sl2.one_hot(2)), sl2.one_hot(2).scale(&frac(1, 4)));
        assert_eq!(t.apply(&sl2.one_hot(0)), sl2.one_hot(0));
        assert_eq!(
            torus_automorphism(&sl2, &datum, &[int(0)]).unwrap_err(),
            LieError::ZeroTorusParameter(0)
        );

        let sl3 = build_sl(3).unwrap();
        let datum = root_datum(&sl3).unwrap();
        let scalars = torus_scalars(&datum, &[int(2), int(3)]).unwrap();
        let both = datum.roots.iter().position(|r| r.simple_coefficients == [1, 1]).unwrap();
        assert_eq!(scalars[both], int(6));
        assert!(torus_automorphism(&sl3, &datum, &[int(2), int(3)]).is_ok());
    }

    #[test]
    fn rigidity_on_torus_maps() {
        let l = build_sl(3).unwrap();
        let datum = root_datum(&l).unwrap();
        let t = torus_automorphism(&l, &datum, &[int(2), frac(-1, 3)]).unwrap();
        assert!(matches!(rigidity(&datum, &t).unwrap(), Rigidity::FixesDOnly(_)));
        let id = torus_automorphism(&l, &datum, &[int(1), int(1)]).unwrap();
        assert_eq!(rigidity(&datum, &id).unwrap(), Rigidity::ForcedIdentity);
        let inner = inner_automorphism(&l, &l.one_hot(2)).unwrap();
        assert_eq!(rigidity(&datum, &inner).unwrap(), Rigidity::MovesD);
    }
}
