//! Adjoint matrices, the Killing form `<x, y> = tr(ad x ad y)`, and the
//! Cartan criterion for semisimplicity.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::algebra::{Element, LieAlgebra};
use crate::error::Result;
use crate::linalg::{dot, Matrix, Scalar};
use crate::subspace::Subspace;

/// `ad(x)` as a matrix; column `j` holds the coordinates of `[x, b_j]`.
pub fn ad_matrix(l: &LieAlgebra, x: &Element) -> Result<Matrix> {
    l.ad(x)
}

/// Gram matrix of the Killing form in the algebra's basis.
pub fn killing_gram(l: &LieAlgebra) -> Matrix {
    let n = l.dim();
    let ads: Vec<Matrix> = (0..n).map(|i| l.ad(&l.one_hot(i)).expect("basis vector")).collect();
    let mut gram = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = trace_of_product(&ads[i], &ads[j]);
            gram[(j, i)] = t.clone();
            gram[(i, j)] = t;
        }
    }
    gram
}

/// `tr(AB)` without forming the product.
fn trace_of_product(a: &Matrix, b: &Matrix) -> Scalar {
    let n = a.rows();
    let mut acc = Scalar::zero();
    for k in 0..n {
        for l in 0..n {
            let x = &a[(k, l)];
            if x.is_zero() {
                continue;
            }
            let y = &b[(l, k)];
            if !y.is_zero() {
                acc += x * y;
            }
        }
    }
    acc
}

/// Killing form bound to an algebra, with the Gram matrix computed once on
/// first use. Shared references may be used from several threads.
#[derive(Debug)]
pub struct KillingForm<'a> {
    algebra: &'a LieAlgebra,
    gram: OnceLock<Matrix>,
}

impl<'a> KillingForm<'a> {
    pub fn new(algebra: &'a LieAlgebra) -> Self {
        KillingForm {
            algebra,
            gram: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &'a LieAlgebra {
        self.algebra
    }

    pub fn gram(&self) -> &Matrix {
        self.gram.get_or_init(|| killing_gram(self.algebra))
    }

    /// `<x, y> = x^T G y`.
    pub fn eval(&self, x: &Element, y: &Element) -> Result<Scalar> {
        self.algebra.check_element(x)?;
        self.algebra.check_element(y)?;
        Ok(dot(x.coords(), &self.gram().mul_vec(y.coords())))
    }

    /// Kernel of the Gram matrix.
    pub fn radical(&self) -> Subspace {
        Subspace::kernel_of(self.gram())
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_zero()
    }
}

/// `<x, y>` computed from a freshly built Gram matrix.
pub fn killing(l: &LieAlgebra, x: &Element, y: &Element) -> Result<Scalar> {
    KillingForm::new(l).eval(x, y)
}

/// Radical of the Killing form.
pub fn form_radical(l: &LieAlgebra) -> Subspace {
    KillingForm::new(l).radical()
}

/// Cartan's criterion: semisimple iff the Killing form is nondegenerate.
pub fn is_semisimple(l: &LieAlgebra) -> bool {
    KillingForm::new(l).is_nondegenerate()
}
