//! 2-local automorphisms that are not automorphisms.
//!
//! For a Lie algebra `L = [L, L] ⊕ V` with `dim V >= 2` and a nonzero
//! `z ∈ Z(L) ∩ [L, L]`, write `x = x_1 + sum_i λ_i e_i` with `x_1 ∈ [L, L]`
//! and `e_i` a basis of `V`. Then
//!
//! ```text
//! Δ(x) = x + f(λ_1, λ_2) z
//! ```
//!
//! is a 2-local automorphism for any degree-one homogeneous `f`: at a pair
//! `x, y` the derivation `D(w) = (a λ_1(w) + b λ_2(w)) z` with `a, b`
//! solving the 2x2 system `D(x) = f(x) z`, `D(y) = f(y) z` squares to zero
//! (its image is central and inside `[L, L]`, which `D` kills), so
//! `exp D = id + D` is an automorphism agreeing with `Δ` at `x` and `y`.
//! With a non-additive `f`, `Δ` itself is not additive.
//!
//! Witness construction is rule-aware: it reads the coefficients straight
//! off the known form of `Δ` instead of searching the automorphism group.

use num_traits::Zero;
use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg32;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, LieAlgebra};
use crate::builders::is_abelian;
use crate::error::{LieError, Result};
use crate::forms::KillingForm;
use crate::io::{AlgebraDocument, SCHEMA_VERSION};
use crate::linalg::{dot, int, serde_scalar, Matrix, Scalar};
use crate::maps::{exp_nilpotent, is_automorphism, is_derivation, LinearMap};
use crate::subspace::Subspace;

/// `f(λ1, λ2) = λ1^3 / (λ1^2 + λ2^2)`, and `f(0, 0) = 0`.
///
/// Homogeneous of degree one and not additive: `f(1, 1) = 1/2` while
/// `f(1, 0) + f(0, 1) = 1`. Over the rationals the denominator only
/// vanishes at the origin.
pub fn default_f(l1: &Scalar, l2: &Scalar) -> Scalar {
    if l1.is_zero() && l2.is_zero() {
        return Scalar::zero();
    }
    let sq = l1 * l1;
    &sq * l1 / (sq + l2 * l2)
}

/// The scalar function applied to the two extracted coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordinateFn {
    /// [`default_f`].
    Cubic,
    /// [`default_f`] plus a constant. Not homogeneous unless the constant is zero.
    ShiftedCubic(Scalar),
}

impl CoordinateFn {
    pub fn eval(&self, l1: &Scalar, l2: &Scalar) -> Scalar {
        match self {
            CoordinateFn::Cubic => default_f(l1, l2),
            CoordinateFn::ShiftedCubic(c) => default_f(l1, l2) + c,
        }
    }

    /// `"cubic"` or `"cubic+<c>"`.
    pub fn name(&self) -> String {
        match self {
            CoordinateFn::Cubic => "cubic".into(),
            CoordinateFn::ShiftedCubic(c) => format!("cubic+{c}"),
        }
    }

    pub fn parse(name: &str) -> Result<CoordinateFn> {
        match name.strip_prefix("cubic") {
            Some("") => Ok(CoordinateFn::Cubic),
            Some(rest) => rest
                .strip_prefix('+')
                .ok_or_else(|| LieError::Parse(format!("unknown coordinate function {name:?}")))
                .and_then(crate::linalg::parse_scalar)
                .map(CoordinateFn::ShiftedCubic),
            None => Err(LieError::Parse(format!("unknown coordinate function {name:?}"))),
        }
    }
}

/// Data fixing `Δ`: the complement `V`, the central element `z`, and the
/// linear functionals reading `λ_1, λ_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleSetup {
    dim: usize,
    /// `[L, L]`.
    pub derived: Subspace,
    /// Standard basis indices spanning `V`.
    pub complement: Vec<usize>,
    pub z: Element,
    pub f: CoordinateFn,
    /// Set for abelian inputs, where `Z(L) ∩ [L, L] = 0` and `z` is taken
    /// from `Z(L) = L` instead.
    pub abelian_relaxation: bool,
    extractors: [Vec<Scalar>; 2],
}

impl CounterexampleSetup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(λ_1(x), λ_2(x))`.
    pub fn lambdas(&self, x: &Element) -> (Scalar, Scalar) {
        (
            dot(&self.extractors[0], x.coords()),
            dot(&self.extractors[1], x.coords()),
        )
    }

    /// `λ_1 e_1 + λ_2 e_2` for the first two complement vectors.
    pub fn element_from_lambdas(&self, l1: &Scalar, l2: &Scalar) -> Element {
        let mut v = vec![Scalar::zero(); self.dim];
        v[self.complement[0]] = l1.clone();
        v[self.complement[1]] = l2.clone();
        Element::new(v)
    }

    /// Coefficient of `z` in `T(x) = f(λ_1, λ_2) z`.
    pub fn t_coefficient(&self, x: &Element) -> Scalar {
        let (l1, l2) = self.lambdas(x);
        self.f.eval(&l1, &l2)
    }

    /// `D(w) = (a λ_1(w) + b λ_2(w)) z` as a matrix.
    pub fn derivation_matrix(&self, a: &Scalar, b: &Scalar) -> LinearMap {
        let n = self.dim;
        let functional: Vec<Scalar> = self.extractors[0]
            .iter()
            .zip(&self.extractors[1])
            .map(|(p, q)| a * p + b * q)
            .collect();
        let mut m = Matrix::zeros(n, n);
        for (k, zk) in self.z.coords().iter().enumerate() {
            if zk.is_zero() {
                continue;
            }
            for (c, fc) in functional.iter().enumerate() {
                if !fc.is_zero() {
                    m[(k, c)] = zk * fc;
                }
            }
        }
        LinearMap::new(m).expect("square by construction")
    }
}

/// A map evaluated pointwise; not assumed linear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointwiseMap {
    Identity,
    Linear(LinearMap),
    /// `T(x) = f(λ_1(x), λ_2(x)) z`.
    CentralPerturbation(Box<CounterexampleSetup>),
    /// `x -> <x, x> v` for the Killing form with the given Gram matrix.
    KillingQuadratic { gram: Matrix, direction: Element },
    /// Pointwise sum of the parts; must be nonempty.
    Sum(Vec<PointwiseMap>),
}

impl PointwiseMap {
    pub fn kind(&self) -> &'static str {
        match self {
            PointwiseMap::Identity => "identity",
            PointwiseMap::Linear(_) => "linear",
            PointwiseMap::CentralPerturbation(_) => "central-perturbation",
            PointwiseMap::KillingQuadratic { .. } => "killing-quadratic",
            PointwiseMap::Sum(_) => "sum",
        }
    }

    pub fn eval(&self, x: &Element) -> Element {
        match self {
            PointwiseMap::Identity => x.clone(),
            PointwiseMap::Linear(a) => a.apply(x),
            PointwiseMap::CentralPerturbation(s) => s.z.scale(&s.t_coefficient(x)),
            PointwiseMap::KillingQuadratic { gram, direction } => {
                direction.scale(&dot(x.coords(), &gram.mul_vec(x.coords())))
            }
            PointwiseMap::Sum(parts) => {
                let mut it = parts.iter();
                let first = it.next().expect("sum of maps must be nonempty").eval(x);
                it.fold(first, |acc, p| &acc + &p.eval(x))
            }
        }
    }

    /// The setup when the map has the form `id + T`.
    pub fn counterexample_setup(&self) -> Option<&CounterexampleSetup> {
        match self {
            PointwiseMap::Sum(parts) if parts.len() == 2 => match (&parts[0], &parts[1]) {
                (PointwiseMap::Identity, PointwiseMap::CentralPerturbation(s))
                | (PointwiseMap::CentralPerturbation(s), PointwiseMap::Identity) => Some(s),
                _ => None,
            },
            _ => None,
        }
    }

    /// `x -> x + <x, x> v`.
    pub fn identity_plus_killing_quadratic(l: &LieAlgebra, direction: Element) -> PointwiseMap {
        PointwiseMap::Sum(vec![
            PointwiseMap::Identity,
            PointwiseMap::KillingQuadratic {
                gram: crate::forms::killing_gram(l),
                direction,
            },
        ])
    }
}

/// Builds `Δ = id + T` with the default `f`.
pub fn make_counterexample(l: &LieAlgebra) -> Result<(CounterexampleSetup, PointwiseMap)> {
    make_counterexample_with(l, CoordinateFn::Cubic)
}

/// Builds `Δ = id + T` for a chosen coordinate function.
///
/// `V` is spanned by the standard basis vectors completing the echelon
/// basis of `[L, L]`. For nilpotent `L`, `z` is the first echelon vector of
/// the last nonzero lower central term; otherwise the first echelon vector
/// of `Z(L) ∩ [L, L]`. Abelian algebras take `z` to be the last basis
/// vector: `V` is then the span of the other basis vectors when
/// `dim L >= 3`, and all of `L` when `dim L = 2`.
pub fn make_counterexample_with(l: &LieAlgebra, f: CoordinateFn) -> Result<(CounterexampleSetup, PointwiseMap)> {
    let n = l.dim();
    if n < 2 {
        return Err(LieError::InvalidParameter(format!("need dim L >= 2, got {n}")));
    }
    let derived = l.commutator_subalgebra();
    let (z, leading, complement, abelian_relaxation) = if is_abelian(l) {
        let last = n - 1;
        let z = l.one_hot(last);
        if n == 2 {
            (z, Vec::new(), vec![0, 1], true)
        } else {
            (z.clone(), vec![z.into_coords()], (0..last).collect(), true)
        }
    } else {
        let complement = derived.standard_complement();
        if complement.len() < 2 {
            return Err(LieError::HypothesisDimension(complement.len()));
        }
        let center_part = l.center().intersection(&derived);
        if center_part.is_zero() {
            return Err(LieError::HypothesisCenter);
        }
        let z = match l.nilpotency_index() {
            Some(_) => {
                let series = l.lower_central_series();
                let last = &series[series.len() - 2];
                let z = Element::new(last.basis().row(0).to_vec());
                assert!(center_part.contains(z.coords()), "last lower central term must lie in Z(L) ∩ [L,L]");
                z
            }
            None => Element::new(center_part.basis().row(0).to_vec()),
        };
        (z, derived.basis_vectors(), complement, false)
    };

    // Rows of the decomposition basis: leading block, then V.
    let offset = leading.len();
    let mut rows = leading;
    rows.extend(complement.iter().map(|&i| l.one_hot(i).into_coords()));
    let basis = Matrix::from_rows(rows, n);
    let inv = basis.inverse()?;
    // x = c · B  =>  c = x · B^{-1}; λ_t is column (offset + t) of B^{-1}.
    let extractors = [inv.col(offset), inv.col(offset + 1)];

    let setup = CounterexampleSetup {
        dim: n,
        derived,
        complement,
        z,
        f,
        abelian_relaxation,
        extractors,
    };
    let delta = PointwiseMap::Sum(vec![
        PointwiseMap::Identity,
        PointwiseMap::CentralPerturbation(Box::new(setup.clone())),
    ]);
    Ok((setup, delta))
}

/// Whether a pair witness is a derivation or an automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Derivation,
    Automorphism,
}

/// A linear map agreeing with the target at `x` and `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub x: Element,
    pub y: Element,
    pub witness: LinearMap,
    pub kind: WitnessKind,
    /// `(a, b)` of `D(w) = (a λ_1 + b λ_2) z`, when the witness comes from one.
    pub coefficients: Option<(Scalar, Scalar)>,
}

impl PairWitness {
    /// Re-checks agreement with `target` at both points and the witness predicate.
    pub fn validate(&self, l: &LieAlgebra, target: &PointwiseMap) -> std::result::Result<(), String> {
        for (name, p) in [("x", &self.x), ("y", &self.y)] {
            if self.witness.apply(p) != target.eval(p) {
                return Err(format!("witness disagrees with the map at {name}"));
            }
        }
        let report = match self.kind {
            WitnessKind::Derivation => is_derivation(l, &self.witness),
            WitnessKind::Automorphism => is_automorphism(l, &self.witness),
        }
        .map_err(|e| e.to_string())?;
        if !report.ok {
            return Err(format!(
                "witness is not a {} (failing pair {:?}, invertible {})",
                match self.kind {
                    WitnessKind::Derivation => "derivation",
                    WitnessKind::Automorphism => "automorphism",
                },
                report.failing_pair,
                report.invertible
            ));
        }
        Ok(())
    }
}

/// Solves `a p1 + b p2 = r` for the two rows `(p1, p2, r)`.
///
/// A unique solution is returned when the rows are independent. Otherwise
/// the first nonzero row is solved with `b = 0` when its `p1` is nonzero,
/// else with `a = 0`, and the result must satisfy both rows.
pub fn solve_pair_system(rows: [(Scalar, Scalar, Scalar); 2]) -> Result<(Scalar, Scalar)> {
    let [(p1, p2, r), (q1, q2, s)] = &rows;
    let det = p1 * q2 - p2 * q1;
    let (a, b) = if !det.is_zero() {
        ((r * q2 - p2 * s) / &det, (p1 * s - r * q1) / &det)
    } else {
        match rows.iter().find(|(c1, c2, _)| !(c1.is_zero() && c2.is_zero())) {
            None => (Scalar::zero(), Scalar::zero()),
            Some((c1, _, rhs)) if !c1.is_zero() => (rhs / c1, Scalar::zero()),
            Some((_, c2, rhs)) => (Scalar::zero(), rhs / c2),
        }
    };
    for (c1, c2, rhs) in &rows {
        if &(&a * c1 + &b * c2) != rhs {
            return Err(LieError::WitnessInconsistent);
        }
    }
    Ok((a, b))
}

/// The derivation `D(w) = (a λ_1(w) + b λ_2(w)) z` agreeing with `T` at `x` and `y`.
pub fn witness_derivation(setup: &CounterexampleSetup, x: &Element, y: &Element) -> Result<PairWitness> {
    let (x1, x2) = setup.lambdas(x);
    let (y1, y2) = setup.lambdas(y);
    let fx = setup.f.eval(&x1, &x2);
    let fy = setup.f.eval(&y1, &y2);
    let (a, b) = solve_pair_system([(x1, x2, fx), (y1, y2, fy)])?;
    Ok(PairWitness {
        x: x.clone(),
        y: y.clone(),
        witness: setup.derivation_matrix(&a, &b),
        kind: WitnessKind::Derivation,
        coefficients: Some((a, b)),
    })
}

/// `id + D` for the witness derivation `D`.
///
/// Whenever `D^2 = 0` this is `exp D`, computed through
/// [`exp_nilpotent`]. The only setup where `D^2` can be nonzero is the
/// two-dimensional abelian algebra (where `z` lies in `V`); there `id + D`
/// is returned as is and must be invertible to validate.
pub fn witness_automorphism(l: &LieAlgebra, setup: &CounterexampleSetup, x: &Element, y: &Element) -> Result<PairWitness> {
    let derivation = witness_derivation(setup, x, y)?;
    let d = &derivation.witness;
    let phi = if d.nilpotency_order().is_some_and(|k| k <= 2) {
        exp_nilpotent(l, d)?
    } else {
        LinearMap::identity(setup.dim).add(d)
    };
    Ok(PairWitness {
        witness: phi,
        kind: WitnessKind::Automorphism,
        ..derivation
    })
}

/// Where certification pairs come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSource {
    Explicit(Vec<(Element, Element)>),
    /// `count` pairs from [`sample_pairs`].
    Seeded { seed: u64, count: usize },
}

/// Deterministic sample of element pairs with coordinates in `{-3, ..., 3}`.
///
/// Uses PCG32 (`rand_pcg::Pcg32`) seeded with `seed_from_u64(seed)`; for
/// each pair the `dim` coordinates of `x` are drawn first, then those of `y`.
pub fn sample_pairs(dim: usize, seed: u64, count: usize) -> Vec<(Element, Element)> {
    let mut rng = Pcg32::seed_from_u64(seed);
    let draw = |rng: &mut Pcg32| {
        Element::new((0..dim).map(|_| int(rng.random_range(-3i64..=3))).collect())
    };
    (0..count)
        .map(|_| {
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            (x, y)
        })
        .collect()
}

/// A pair for which no valid witness could be produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFailure {
    pub index: usize,
    pub x: Element,
    pub y: Element,
    pub reason: String,
}

/// `x, y` with `Δ(x + y) != Δ(x) + Δ(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonAdditivity {
    pub x: Element,
    pub y: Element,
    /// `Δ(x + y) - Δ(x) - Δ(y)`.
    pub defect: Element,
}

impl NonAdditivity {
    pub fn verify(&self, map: &PointwiseMap) -> bool {
        let defect = additivity_defect(map, &self.x, &self.y);
        !defect.is_zero() && defect == self.defect
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Every sampled pair has a witness; no non-additivity found.
    #[serde(rename = "certified-2-local-on-sample")]
    Certified2LocalOnSample,
    /// Some pair has no witness, so the map is not 2-local and hence not an automorphism.
    RefutedNotAutomorphism,
    /// Every sampled pair has a witness and the map is not additive.
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witnesses: Vec<PairWitness>,
    pub failures: Vec<PairFailure>,
    pub nonadditivity: Option<NonAdditivity>,
}

impl Certificate {
    /// Re-runs every stored check against `map`.
    pub fn revalidate(&self, l: &LieAlgebra, map: &PointwiseMap) -> std::result::Result<(), String> {
        for (i, w) in self.witnesses.iter().enumerate() {
            w.validate(l, map).map_err(|e| format!("witness {i}: {e}"))?;
        }
        if let Some(na) = &self.nonadditivity {
            if !na.verify(map) {
                return Err("non-additivity witness does not re-verify".into());
            }
        }
        if verdict_for(self.failures.is_empty(), self.nonadditivity.is_some()) != self.verdict {
            return Err("verdict inconsistent with the recorded evidence".into());
        }
        Ok(())
    }
}

fn verdict_for(all_witnessed: bool, nonadditive: bool) -> Verdict {
    match (all_witnessed, nonadditive) {
        (false, _) => Verdict::RefutedNotAutomorphism,
        (true, true) => Verdict::Both,
        (true, false) => Verdict::Certified2LocalOnSample,
    }
}

/// Produces and re-validates an automorphism witness for every pair.
///
/// Supported maps: the identity, linear maps (each pair is witnessed by
/// the map itself), and `id + T` from [`make_counterexample_with`].
pub fn certify_two_local(l: &LieAlgebra, map: &PointwiseMap, pairs: &PairSource) -> Result<Certificate> {
    enum Rule<'a> {
        Fixed(LinearMap),
        Counterexample(&'a CounterexampleSetup),
    }
    let rule = match map {
        PointwiseMap::Identity => Rule::Fixed(LinearMap::identity(l.dim())),
        PointwiseMap::Linear(a) => Rule::Fixed(a.clone()),
        other => match other.counterexample_setup() {
            Some(s) => Rule::Counterexample(s),
            None => return Err(LieError::UnsupportedRule(other.kind().into())),
        },
    };
    let pairs = match pairs {
        PairSource::Explicit(p) => p.clone(),
        PairSource::Seeded { seed, count } => sample_pairs(l.dim(), *seed, *count),
    };
    for (x, y) in &pairs {
        l.check_element(x)?;
        l.check_element(y)?;
    }

    let outcomes: Vec<std::result::Result<PairWitness, PairFailure>> = pairs
        .par_iter()
        .enumerate()
        .map(|(index, (x, y))| {
            let fail = |reason: String| PairFailure {
                index,
                x: x.clone(),
                y: y.clone(),
                reason,
            };
            let witness = match &rule {
                Rule::Fixed(a) => PairWitness {
                    x: x.clone(),
                    y: y.clone(),
                    witness: a.clone(),
                    kind: WitnessKind::Automorphism,
                    coefficients: None,
                },
                Rule::Counterexample(s) => witness_automorphism(l, s, x, y).map_err(|e| fail(e.to_string()))?,
            };
            witness.validate(l, map).map_err(fail)?;
            Ok(witness)
        })
        .collect();

    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(w) => witnesses.push(w),
            Err(f) => failures.push(f),
        }
    }
    let nonadditivity = refute_automorphism(l, map).ok();
    Ok(Certificate {
        verdict: verdict_for(failures.is_empty(), nonadditivity.is_some()),
        witnesses,
        failures,
        nonadditivity,
    })
}

/// `Δ(x + y) - Δ(x) - Δ(y)`.
pub fn additivity_defect(map: &PointwiseMap, x: &Element, y: &Element) -> Element {
    &(&map.eval(&(x + y)) - &map.eval(x)) - &map.eval(y)
}

/// Finds `x, y` with `Δ(x + y) != Δ(x) + Δ(y)`.
///
/// For `id + T` maps the scan runs over complement coordinate pairs,
/// starting with `(1, 0), (0, 1)` and continuing through `{-2..2}^2 x
/// {-2..2}^2` in lexicographic order. Other maps are scanned over pairs of
/// basis vectors and then over `(b_i + b_j, b_k)`.
pub fn refute_automorphism(l: &LieAlgebra, map: &PointwiseMap) -> Result<NonAdditivity> {
    let n = l.dim();
    let candidates: Vec<(Element, Element)> = match map.counterexample_setup() {
        Some(s) => {
            let range: Vec<Scalar> = (-2..=2).map(int).collect();
            let coords: Vec<(Scalar, Scalar)> = range
                .iter()
                .flat_map(|a| range.iter().map(move |b| (a.clone(), b.clone())))
                .collect();
            let mut c = vec![(
                s.element_from_lambdas(&int(1), &int(0)),
                s.element_from_lambdas(&int(0), &int(1)),
            )];
            for (a1, a2) in &coords {
                for (b1, b2) in &coords {
                    c.push((s.element_from_lambdas(a1, a2), s.element_from_lambdas(b1, b2)));
                }
            }
            c
        }
        None => {
            let mut c = Vec::new();
            for i in 0..n {
                for j in i..n {
                    c.push((l.one_hot(i), l.one_hot(j)));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        c.push((&l.one_hot(i) + &l.one_hot(j), l.one_hot(k)));
                    }
                }
            }
            c
        }
    };
    candidates
        .into_iter()
        .find_map(|(x, y)| {
            let defect = additivity_defect(map, &x, &y);
            (!defect.is_zero()).then_some(NonAdditivity { x, y, defect })
        })
        .filter(|na| na.verify(map))
        .ok_or(LieError::NoNonadditivityWitness)
}

/// `<T(x + y) - T(x) - T(y), T(z)>` for the Killing form of a semisimple algebra.
pub fn killing_additivity_defect(
    l: &LieAlgebra,
    t: &PointwiseMap,
    x: &Element,
    y: &Element,
    z: &Element,
) -> Result<Scalar> {
    killing_additivity_defect_with(&KillingForm::new(l), t, x, y, z)
}

/// As [`killing_additivity_defect`], reusing a Killing form (and its cached Gram matrix).
pub fn killing_additivity_defect_with(
    form: &KillingForm<'_>,
    t: &PointwiseMap,
    x: &Element,
    y: &Element,
    z: &Element,
) -> Result<Scalar> {
    if !form.is_nondegenerate() {
        return Err(LieError::NotSemisimple);
    }
    let l = form.algebra();
    for v in [x, y, z] {
        l.check_element(v)?;
    }
    form.eval(&additivity_defect(t, x, y), &t.eval(z))
}

/// Setup summary stored in certificate documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupRecord {
    pub z: Element,
    pub complement: Vec<usize>,
    pub abelian_relaxation: bool,
}

impl SetupRecord {
    pub fn from_setup(s: &CounterexampleSetup) -> SetupRecord {
        SetupRecord {
            z: s.z.clone(),
            complement: s.complement.clone(),
            abelian_relaxation: s.abelian_relaxation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub x: Element,
    pub y: Element,
    #[serde(with = "serde_scalar")]
    pub a: Scalar,
    #[serde(with = "serde_scalar")]
    pub b: Scalar,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureRecord {
    pub index: usize,
    pub x: Element,
    pub y: Element,
    pub reason: String,
}

/// JSON form of a counterexample certificate, self-contained enough to be
/// re-validated from the file alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub schema_version: String,
    pub algebra: AlgebraDocument,
    pub f: String,
    pub seed: u64,
    pub pair_count: usize,
    pub setup: SetupRecord,
    pub pairs: Vec<PairRecord>,
    pub failures: Vec<FailureRecord>,
    pub nonadditivity: Option<NonAdditivity>,
    pub verdict: Verdict,
}

/// Builds the counterexample for `l` and certifies it on seeded pairs.
pub fn counterexample_document(l: &LieAlgebra, f: CoordinateFn, seed: u64, count: usize) -> Result<CertificateDocument> {
    let (setup, delta) = make_counterexample_with(l, f)?;
    let cert = certify_two_local(l, &delta, &PairSource::Seeded { seed, count })?;
    let pairs = cert
        .witnesses
        .iter()
        .map(|w| {
            let (a, b) = w.coefficients.clone().expect("counterexample witnesses carry coefficients");
            PairRecord {
                x: w.x.clone(),
                y: w.y.clone(),
                a,
                b,
                verified: true,
            }
        })
        .collect();
    let failures = cert
        .failures
        .iter()
        .map(|f| FailureRecord {
            index: f.index,
            x: f.x.clone(),
            y: f.y.clone(),
            reason: f.reason.clone(),
        })
        .collect();
    Ok(CertificateDocument {
        schema_version: SCHEMA_VERSION.into(),
        algebra: AlgebraDocument::from_algebra(l),
        f: setup.f.name(),
        seed,
        pair_count: count,
        setup: SetupRecord::from_setup(&setup),
        pairs,
        failures,
        nonadditivity: cert.nonadditivity,
        verdict: cert.verdict,
    })
}

/// Result of re-validating a certificate document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Revalidation {
    pub valid: bool,
    pub pairs_checked: usize,
    pub verdict: Verdict,
    pub problems: Vec<String>,
}

/// Re-validates a certificate document from scratch.
///
/// The algebra and setup are rebuilt from the document; the pair list
/// must be exactly the seeded sample; every recorded `(a, b)` must give a
/// derivation `D` whose witness `id + D` is an automorphism agreeing with
/// `Δ` at both points; the non-additivity record must re-evaluate; and the
/// verdict must follow from the evidence. Input errors (a malformed
/// algebra, an unknown `f`) are returned as `Err`.
pub fn revalidate_document(doc: &CertificateDocument) -> Result<Revalidation> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(LieError::Parse(format!("unsupported schema version {:?}", doc.schema_version)));
    }
    let l = doc.algebra.to_algebra()?;
    let f = CoordinateFn::parse(&doc.f)?;
    let (setup, delta) = make_counterexample_with(&l, f)?;
    let mut problems = Vec::new();
    if SetupRecord::from_setup(&setup) != doc.setup {
        problems.push("recorded setup differs from the rebuilt setup".to_string());
    }

    let expected = sample_pairs(l.dim(), doc.seed, doc.pair_count);
    let mut recorded: Vec<(usize, &Element, &Element)> = Vec::new();
    let mut pair_iter = doc.pairs.iter();
    let failed: std::collections::HashSet<usize> = doc.failures.iter().map(|f| f.index).collect();
    for (i, (x, y)) in expected.iter().enumerate() {
        let stored = if failed.contains(&i) {
            doc.failures.iter().find(|f| f.index == i).map(|f| (&f.x, &f.y))
        } else {
            pair_iter.next().map(|p| (&p.x, &p.y))
        };
        match stored {
            Some((sx, sy)) if sx == x && sy == y => recorded.push((i, sx, sy)),
            _ => problems.push(format!("pair {i} does not match the seeded sample")),
        }
    }
    if pair_iter.next().is_some() {
        problems.push("more pair records than the sample size".into());
    }

    let pair_problems: Vec<String> = doc
        .pairs
        .par_iter()
        .enumerate()
        .filter_map(|(i, p)| {
            if !p.verified {
                return Some(format!("pair record {i} is not marked verified"));
            }
            if l.check_element(&p.x).is_err() || l.check_element(&p.y).is_err() {
                return Some(format!("pair record {i} has wrong dimension"));
            }
            let d = setup.derivation_matrix(&p.a, &p.b);
            match is_derivation(&l, &d) {
                Ok(r) if r.ok => {}
                _ => return Some(format!("pair record {i}: D is not a derivation")),
            }
            let witness = PairWitness {
                x: p.x.clone(),
                y: p.y.clone(),
                witness: LinearMap::identity(l.dim()).add(&d),
                kind: WitnessKind::Automorphism,
                coefficients: Some((p.a.clone(), p.b.clone())),
            };
            if d.nilpotency_order().is_some_and(|k| k <= 2) && exp_nilpotent(&l, &d).ok().as_ref() != Some(&witness.witness) {
                return Some(format!("pair record {i}: exp D differs from id + D"));
            }
            witness.validate(&l, &delta).err().map(|e| format!("pair record {i}: {e}"))
        })
        .collect();
    problems.extend(pair_problems);

    for f in &doc.failures {
        if witness_automorphism(&l, &setup, &f.x, &f.y).is_ok_and(|w| w.validate(&l, &delta).is_ok()) {
            problems.push(format!("failure record {} actually has a witness", f.index));
        }
    }
    match &doc.nonadditivity {
        Some(na) if !na.verify(&delta) => problems.push("non-additivity witness does not re-verify".into()),
        _ => {}
    }
    let verdict = verdict_for(doc.failures.is_empty(), doc.nonadditivity.is_some());
    if verdict != doc.verdict {
        problems.push("verdict inconsistent with the recorded evidence".into());
    }
    Ok(Revalidation {
        valid: problems.is_empty(),
        pairs_checked: recorded.len(),
        verdict: doc.verdict,
        problems,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_abelian, build_filiform, build_heisenberg, build_sl};
    use crate::linalg::frac;

    #[test]
    fn default_f_values() {
        assert_eq!(default_f(&int(1), &int(0)), int(1));
        assert_eq!(default_f(&int(0), &int(1)), int(0));
        assert_eq!(default_f(&int(1), &int(1)), frac(1, 2));
        assert_eq!(default_f(&int(3), &int(0)), int(3));
        assert_eq!(default_f(&int(2), &int(2)), int(1));
        assert_eq!(default_f(&int(0), &int(0)), int(0));
    }

    #[test]
    fn coordinate_fn_names_round_trip() {
        for f in [CoordinateFn::Cubic, CoordinateFn::ShiftedCubic(int(1)), CoordinateFn::ShiftedCubic(frac(-2, 3))] {
            assert_eq!(CoordinateFn::parse(&f.name()).unwrap(), f);
        }
        assert!(CoordinateFn::parse("quartic").is_err());
    }

    #[test]
    fn heisenberg2_delta_value() {
        let l = build_heisenberg(2).unwrap();
        let (setup, delta) = make_counterexample(&l).unwrap();
        assert_eq!(setup.complement, vec![0, 1, 2, 3]);
        assert_eq!(setup.z, l.one_hot(4));
        let x = &l.one_hot(0) + &l.one_hot(1);
        let expected = x.add_scaled(&frac(1, 2), &l.one_hot(4));
        assert_eq!(delta.eval(&x), expected);
    }

    #[test]
    fn filiform4_setup() {
        let l = build_filiform(4).unwrap();
        let (setup, _) = make_counterexample(&l).unwrap();
        assert_eq!(setup.derived.dim(), 2);
        assert_eq!(setup.complement, vec![0, 1]);
        assert_eq!(setup.z, l.one_hot(3));
    }

    #[test]
    fn abelian_setups() {
        let a2 = build_abelian(2).unwrap();
        let (s2, _) = make_counterexample(&a2).unwrap();
        assert!(s2.abelian_relaxation);
        assert_eq!(s2.complement, vec![0, 1]);
        let a3 = build_abelian(3).unwrap();
        let (s3, _) = make_counterexample(&a3).unwrap();
        assert_eq!(s3.complement, vec![0, 1]);
        assert_eq!(s3.z, a3.one_hot(2));
        assert!(make_counterexample(&build_abelian(1).unwrap()).is_err());
    }

    #[test]
    fn hypotheses_fail_on_sl2() {
        assert_eq!(
            make_counterexample(&build_sl(2).unwrap()).unwrap_err(),
            LieError::HypothesisDimension(0)
        );
    }

    #[test]
    fn witness_solver_examples() {
        let l = build_heisenberg(1).unwrap();
        let (s, _) = make_counterexample(&l).unwrap();
        let e = |a: i64, b: i64| s.element_from_lambdas(&int(a), &int(b));

        let w = witness_derivation(&s, &e(1, 0), &e(0, 1)).unwrap();
        assert_eq!(w.coefficients, Some((int(1), int(0))));

        let w = witness_derivation(&s, &e(1, 1), &e(2, 2)).unwrap();
        assert_eq!(w.coefficients, Some((frac(1, 2), int(0))));

        let z = s.z.clone();
        let w = witness_derivation(&s, &z, &e(0, 3)).unwrap();
        assert_eq!(w.coefficients, Some((int(0), int(0))));
        let w = witness_derivation(&s, &z, &e(3, 1)).unwrap();
        assert_eq!(w.coefficients, Some((frac(9, 10), int(0))));
    }

    #[test]
    fn inconsistent_system_is_reported() {
        let rows = [(int(1), int(0), int(2)), (int(2), int(0), int(3))];
        assert_eq!(solve_pair_system(rows).unwrap_err(), LieError::WitnessInconsistent);
    }

    #[test]
    fn heisenberg_witness_at_basis_pair() {
        let l = build_heisenberg(1).unwrap();
        let (s, delta) = make_counterexample(&l).unwrap();
        let (x, y) = (l.one_hot(0), l.one_hot(1));
        let w = witness_automorphism(&l, &s, &x, &y).unwrap();
        assert_eq!(w.witness.apply(&x), &x + &s.z);
        assert_eq!(delta.eval(&x), &x + &s.z);
        w.validate(&l, &delta).unwrap();
        let d = witness_derivation(&s, &x, &y).unwrap();
        let inv = LinearMap::identity(3).add(&d.witness.scale(&int(-1)));
        assert!(w.witness.compose(&inv).is_identity());
    }

    #[test]
    fn refutation_defect_is_minus_half_z() {
        let l = build_heisenberg(1).unwrap();
        let (s, delta) = make_counterexample(&l).unwrap();
        let na = refute_automorphism(&l, &delta).unwrap();
        assert_eq!(na.x, l.one_hot(0));
        assert_eq!(na.y, l.one_hot(1));
        assert_eq!(na.defect, s.z.scale(&frac(-1, 2)));
        assert_eq!(
            refute_automorphism(&l, &PointwiseMap::Identity).unwrap_err(),
            LieError::NoNonadditivityWitness
        );
    }

    #[test]
    fn sampler_is_deterministic() {
        assert_eq!(sample_pairs(5, 7, 20), sample_pairs(5, 7, 20));
        assert_ne!(sample_pairs(5, 7, 20), sample_pairs(5, 8, 20));
        let pairs = sample_pairs(3, 1, 50);
        assert!(pairs
            .iter()
            .flat_map(|(x, y)| x.coords().iter().chain(y.coords()))
            .all(|c| *c >= int(-3) && *c <= int(3)));
    }

    #[test]
    fn black_box_maps_are_rejected() {
        let l = build_sl(2).unwrap();
        let control = PointwiseMap::identity_plus_killing_quadratic(&l, l.one_hot(0));
        assert!(matches!(
            certify_two_local(&l, &control, &PairSource::Seeded { seed: 1, count: 3 }),
            Err(LieError::UnsupportedRule(_))
        ));
    }

    #[test]
    fn killing_defect_requires_semisimple() {
        let l = build_heisenberg(1).unwrap();
        let x = l.one_hot(0);
        assert_eq!(
            killing_additivity_defect(&l, &PointwiseMap::Identity, &x, &x, &x).unwrap_err(),
            LieError::NotSemisimple
        );
    }

    #[test]
    fn document_round_trip_revalidates() {
        let l = build_filiform(5).unwrap();
        let doc = counterexample_document(&l, CoordinateFn::Cubic, 3, 40).unwrap();
        assert_eq!(doc.verdict, Verdict::Both);
        let text = serde_json::to_string(&doc).unwrap();
        let back: CertificateDocument = serde_json::from_str(&text).unwrap();
        let r = revalidate_document(&back).unwrap();
        assert!(r.valid, "{:?}", r.problems);
        assert_eq!(r.pairs_checked, 40);

        let mut tampered = back.clone();
        tampered.pairs[3].a = &tampered.pairs[3].a + int(1);
        assert!(!revalidate_document(&tampered).unwrap().valid);
    }
}
