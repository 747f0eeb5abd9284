//! JSON encoding of algebras:
//! `{"dim": n, "labels": [...], "brackets": [[i, j, k, "p/q"], ...], "cartan": [i, ...]}`.
//!
//! Omitted pairs bracket to zero. Entries are normally given for `i < j`
//! only and the loader fills in `c[j][i][k] = -c[i][j][k]`; an explicit
//! entry for `j > i` or `i == j` is kept as written, so inconsistent
//! documents surface as antisymmetry errors.

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::LieAlgebra;
use crate::error::{LieError, Result};
use crate::linalg::{format_scalar, parse_scalar, zero_vec};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    pub dim: usize,
    pub labels: Vec<String>,
    pub brackets: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<Vec<usize>>,
}

impl AlgebraDocument {
    pub fn from_algebra(l: &LieAlgebra) -> AlgebraDocument {
        let n = l.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for (k, c) in l.basis_bracket(i, j) {
                    brackets.push((i, j, *k, format_scalar(c)));
                }
            }
        }
        AlgebraDocument {
            schema_version: Some(SCHEMA_VERSION.to_string()),
            dim: n,
            labels: l.labels().to_vec(),
            brackets,
            cartan: l.cartan_indices().map(<[usize]>::to_vec),
        }
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let n = self.dim;
        if n == 0 {
            return Err(LieError::Parse("dim must be positive".into()));
        }
        if self.labels.len() != n {
            return Err(LieError::Parse(format!("expected {n} labels, got {}", self.labels.len())));
        }
        if let Some(v) = &self.schema_version {
            if v != SCHEMA_VERSION {
                return Err(LieError::Parse(format!("unsupported schema version {v:?}")));
            }
        }
        let mut table = zero_vec(n * n * n);
        let mut explicit = HashSet::new();
        for (i, j, k, c) in &self.brackets {
            if *i >= n || *j >= n || *k >= n {
                return Err(LieError::Parse(format!("bracket index out of range in ({i}, {j}, {k})")));
            }
            if !explicit.insert((*i, *j, *k)) {
                return Err(LieError::Parse(format!("duplicate bracket entry ({i}, {j}, {k})")));
            }
            table[(i * n + j) * n + k] = parse_scalar(c)?;
        }
        for &(i, j, k) in &explicit {
            if i < j && !explicit.contains(&(j, i, k)) {
                let c = table[(i * n + j) * n + k].clone();
                if !c.is_zero() {
                    table[(j * n + i) * n + k] = -c;
                }
            }
        }
        if let Some(c) = &self.cartan {
            let distinct: HashSet<_> = c.iter().collect();
            if distinct.len() != c.len() {
                return Err(LieError::Parse("duplicate cartan index".into()));
            }
        }
        LieAlgebra::from_table(self.labels.clone(), table, self.cartan.clone(), BTreeMap::new())
    }
}

/// Parses and validates an algebra document.
pub fn load_algebra(document: &str) -> Result<LieAlgebra> {
    let doc: AlgebraDocument = serde_json::from_str(document).map_err(|e| LieError::Parse(e.to_string()))?;
    doc.to_algebra()
}

pub fn algebra_to_json(l: &LieAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraDocument::from_algebra(l)).expect("algebra document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_heisenberg, build_sl};

    #[test]
    fn sl2_document_matches_builder() {
        let doc = r#"{"dim": 3, "labels": ["h1", "e12", "f12"],
            "brackets": [[0, 1, 1, "2"], [0, 2, 2, "-2"], [1, 2, 0, "1"]], "cartan": [0]}"#;
        let loaded = load_algebra(doc).unwrap();
        let built = build_sl(2).unwrap();
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    assert_eq!(loaded.structure_constant(i, j, k), built.structure_constant(i, j, k));
                }
            }
        }
        assert_eq!(loaded.cartan_indices(), Some(&[0][..]));
    }

    #[test]
    fn antisymmetry_violation() {
        let doc = r#"{"dim": 2, "labels": ["a", "b"], "brackets": [[0, 1, 0, "1"], [1, 0, 0, "1"]]}"#;
        assert_eq!(load_algebra(doc).unwrap_err(), LieError::Antisymmetry { i: 0, j: 1 });
    }

    #[test]
    fn jacobi_violation_names_triple() {
        // [a,b] = c, [b,c] = a, [c,a] = c: the cyclic sum on (a,b,c) is nonzero.
        let doc = r#"{"dim": 3, "labels": ["a", "b", "c"],
            "brackets": [[0, 1, 2, "1"], [1, 2, 0, "1"], [0, 2, 2, "-1"]]}"#;
        let err = load_algebra(doc).unwrap_err();
        assert_eq!(err, LieError::Jacobi { i: 0, j: 1, k: 2 });
        assert!(err.to_string().contains("not a Lie algebra"));
    }

    #[test]
    fn schema_violations_are_parse_errors() {
        for doc in [
            r#"{"dim": 2, "labels": ["a"], "brackets": []}"#,
            r#"{"dim": 2, "labels": ["a", "b"], "brackets": [[0, 5, 0, "1"]]}"#,
            r#"{"dim": 2, "labels": ["a", "b"], "brackets": [[0, 1, 0, "x"]]}"#,
            r#"{"dim": 2, "labels": ["a", "b"], "brackets": [], "extra": 1}"#,
            r#"{"dim": 2, "labels": ["a", "b"]}"#,
        ] {
            assert!(matches!(load_algebra(doc), Err(LieError::Parse(_))), "{doc}");
        }
    }

    #[test]
    fn round_trip_through_json() {
        let l = build_heisenberg(2).unwrap();
        let back = load_algebra(&algebra_to_json(&l)).unwrap();
        assert_eq!(AlgebraDocument::from_algebra(&back), AlgebraDocument::from_algebra(&l));
    }
}
