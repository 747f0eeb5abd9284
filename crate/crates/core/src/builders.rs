//! Builders for the algebra families used throughout the crate.
//!
//! Basis orderings are frozen:
//!
//! * `sl(n)`: `h1..h(n-1)` with `h_i = E_ii - E_(i+1)(i+1)`, then the
//!   positive root vectors `E_ij` (`i < j`, label `e{i}{j}`) ordered by
//!   height `j - i` and then by `i`, then the negative root vectors `E_ji`
//!   (label `f{i}{j}`) in the same order. Indices in labels are 1-based.
//!   With this normalization `[e_a, f_a]` is the coroot `h_a`, so
//!   `(h_a, e_a, f_a)` is a standard sl(2)-triple for each positive root.
//! * `abelian(n)`: `b1..bn`, all brackets zero.
//! * `heisenberg(k)`: `x1..xk, y1..yk, z` with `[x_i, y_i] = z`.
//! * `filiform(n)`: `e1..en` with `[e1, e_i] = e_(i+1)` for `2 <= i <= n-1`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::LieAlgebra;
use crate::error::{LieError, Result};
use crate::linalg::{int, zero_vec, Scalar};

/// Mutable dense structure table used while assembling a builder.
struct TableBuilder {
    dim: usize,
    table: Vec<Scalar>,
}

impl TableBuilder {
    fn new(dim: usize) -> Self {
        TableBuilder {
            dim,
            table: zero_vec(dim * dim * dim),
        }
    }

    /// Sets `[b_i, b_j] += c b_k` together with the antisymmetric partner.
    fn set(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        let n = self.dim;
        self.table[(j * n + i) * n + k] -= &c;
        self.table[(i * n + j) * n + k] += c;
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Positive root index pairs `(i, j)`, `i < j`, ordered by height then `i`.
fn positive_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (j - i, i));
    pairs
}

/// The special linear algebra `sl(n)` in its Chevalley basis.
pub fn build_sl(n: usize) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(LieError::InvalidParameter(format!("sl(n) needs n >= 2, got {n}")));
    }
    let pos = positive_pairs(n);
    let rank = n - 1;
    let dim = n * n - 1;

    // Basis element index -> sparse n x n matrix.
    let mut mats: Vec<Vec<((usize, usize), i64)>> = Vec::with_capacity(dim);
    let mut names = Vec::with_capacity(dim);
    let mut root_labels = BTreeMap::new();
    for i in 0..rank {
        mats.push(vec![((i, i), 1), ((i + 1, i + 1), -1)]);
        names.push(format!("h{}", i + 1));
    }
    let root_name = |i: usize, j: usize| (i + 1..=j).map(|t| format!("a{t}")).collect::<Vec<_>>();
    for &(i, j) in &pos {
        root_labels.insert(mats.len(), root_name(i, j).join("+"));
        mats.push(vec![((i, j), 1)]);
        names.push(format!("e{}{}", i + 1, j + 1));
    }
    for &(i, j) in &pos {
        let neg: Vec<String> = root_name(i, j).into_iter().map(|s| format!("-{s}")).collect();
        root_labels.insert(mats.len(), neg.concat());
        mats.push(vec![((j, i), 1)]);
        names.push(format!("f{}{}", i + 1, j + 1));
    }

    let mut index_of = vec![vec![usize::MAX; n]; n];
    for (t, &(i, j)) in pos.iter().enumerate() {
        index_of[i][j] = rank + t;
        index_of[j][i] = rank + pos.len() + t;
    }

    let dense = |m: &[((usize, usize), i64)]| {
        let mut d = vec![vec![0i64; n]; n];
        for &((r, c), v) in m {
            d[r][c] += v;
        }
        d
    };
    let mut tb = TableBuilder::new(dim);
    for a in 0..dim {
        let ma = dense(&mats[a]);
        for (b, mat_b) in mats.iter().enumerate().skip(a + 1) {
            let mb = dense(mat_b);
            let mut comm = vec![vec![0i64; n]; n];
            for r in 0..n {
                for c in 0..n {
                    let mut acc = 0;
                    for t in 0..n {
                        acc += ma[r][t] * mb[t][c] - mb[r][t] * ma[t][c];
                    }
                    comm[r][c] = acc;
                }
            }
            // Off-diagonal part lands on root vectors.
            for r in 0..n {
                for c in 0..n {
                    if r != c && comm[r][c] != 0 {
                        tb.set(a, b, index_of[r][c], int(comm[r][c]));
                    }
                }
            }
            // Traceless diagonal diag(d_1..d_n) = sum_k (d_1 + ... + d_k) h_k.
            let mut partial = 0;
            for (k, row) in comm.iter().enumerate().take(rank) {
                partial += row[k];
                if partial != 0 {
                    tb.set(a, b, k, int(partial));
                }
            }
        }
    }
    LieAlgebra::from_table(names, tb.table, Some((0..rank).collect()), root_labels)
}

/// The abelian algebra of dimension `n`.
pub fn build_abelian(n: usize) -> Result<LieAlgebra> {
    if n < 1 {
        return Err(LieError::InvalidParameter("abelian(n) needs n >= 1".into()));
    }
    LieAlgebra::from_table(labels("b", n), zero_vec(n * n * n), None, BTreeMap::new())
}

/// The Heisenberg algebra of dimension `2k + 1`.
pub fn build_heisenberg(k: usize) -> Result<LieAlgebra> {
    if k < 1 {
        return Err(LieError::InvalidParameter("heisenberg(k) needs k >= 1".into()));
    }
    let dim = 2 * k + 1;
    let mut names = labels("x", k);
    names.extend(labels("y", k));
    names.push("z".into());
    let mut tb = TableBuilder::new(dim);
    for i in 0..k {
        tb.set(i, k + i, 2 * k, int(1));
    }
    LieAlgebra::from_table(names, tb.table, None, BTreeMap::new())
}

/// The standard filiform algebra of dimension `n`.
pub fn build_filiform(n: usize) -> Result<LieAlgebra> {
    if n < 3 {
        return Err(LieError::InvalidParameter(format!("filiform(n) needs n >= 3, got {n}")));
    }
    let mut tb = TableBuilder::new(n);
    for i in 1..n - 1 {
        tb.set(0, i, i + 1, int(1));
    }
    LieAlgebra::from_table(labels("e", n), tb.table, None, BTreeMap::new())
}

/// Parses builder syntax `name:param` (`sl:3`, `heisenberg:2`, `filiform:5`, `abelian:4`).
pub fn build_from_spec(spec: &str) -> Result<LieAlgebra> {
    let (name, param) = spec
        .split_once(':')
        .ok_or_else(|| LieError::InvalidParameter(format!("builder {spec:?} is not of the form name:param")))?;
    let p: usize = param
        .trim()
        .parse()
        .map_err(|_| LieError::InvalidParameter(format!("builder parameter {param:?} is not a non-negative integer")))?;
    match name.trim() {
        "sl" => build_sl(p),
        "abelian" => build_abelian(p),
        "heisenberg" => build_heisenberg(p),
        "filiform" => build_filiform(p),
        other => Err(LieError::InvalidParameter(format!("unknown builder {other:?}"))),
    }
}

/// True when the algebra has no nonzero structure constants.
pub fn is_abelian(l: &LieAlgebra) -> bool {
    l.table().iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Element;

    #[test]
    fn sl2_basis_and_brackets() {
        let l = build_sl(2).unwrap();
        assert_eq!(l.labels(), ["h1", "e12", "f12"]);
        let (h, e, f) = (l.one_hot(0), l.one_hot(1), l.one_hot(2));
        assert_eq!(l.bracket(&h, &e).unwrap(), e.scale(&int(2)));
        assert_eq!(l.bracket(&h, &f).unwrap(), f.scale(&int(-2)));
        assert_eq!(l.bracket(&e, &f).unwrap(), h);
        assert!(l.bracket(&h, &h).unwrap().is_zero());
    }

    #[test]
    fn sl3_layout() {
        let l = build_sl(3).unwrap();
        assert_eq!(l.dim(), 8);
        assert_eq!(l.labels(), ["h1", "h2", "e12", "e23", "e13", "f12", "f23", "f13"]);
        assert_eq!(l.cartan_indices(), Some(&[0, 1][..]));
        assert_eq!(l.root_labels().len(), 6);
        assert_eq!(l.root_labels()[&4], "a1+a2");
        assert_eq!(l.root_labels()[&7], "-a1-a2");
    }

    #[test]
    fn builder_minimums() {
        assert!(build_sl(1).is_err());
        assert!(build_abelian(0).is_err());
        assert!(build_heisenberg(0).is_err());
        assert!(build_filiform(2).is_err());
        assert!(build_from_spec("so:3").is_err());
        assert!(build_from_spec("sl3").is_err());
        assert_eq!(build_from_spec("heisenberg:2").unwrap().dim(), 5);
    }

    #[test]
    fn abelian_brackets_vanish() {
        let l = build_abelian(2).unwrap();
        assert!(is_abelian(&l));
        let x = Element::from_ints(&[3, -1]);
        let y = Element::from_ints(&[2, 5]);
        assert!(l.bracket(&x, &y).unwrap().is_zero());
    }
}
