use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use liecert::forms::KillingForm;
use liecert::linalg::{serde_matrix, serde_scalars, Matrix, Scalar};
use liecert::maps::{derivation_space, exp_nilpotent, is_derivation};
use liecert::roots::{is_regular_semisimple, root_datum, root_values_at};
use liecert::twolocal::{counterexample_document, revalidate_document, Revalidation};
use liecert::{
    build_from_spec, load_algebra, AlgebraDocument, CertificateDocument, CoordinateFn, LieAlgebra, LieError,
    LinearMap, RootDatum, Verdict, SCHEMA_VERSION,
};

#[derive(Debug, Parser)]
#[command(name = "liecert", version, about = "Exact Lie algebra computations and 2-local automorphism certificates")]
pub struct Cli {
    /// Write the JSON document to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the structure-constant document of an algebra.
    Build(Source),
    /// Dimension, semisimplicity, nilpotency, solvability and center.
    Analyze(Source),
    /// Killing form Gram matrix and radical.
    Killing(Source),
    /// Root decomposition relative to the designated Cartan subalgebra.
    Roots(Source),
    /// Dimension of the derivation algebra.
    Derivations {
        #[command(flatten)]
        source: Source,
        /// Also emit a basis of Der(L).
        #[arg(long)]
        basis: bool,
    },
    /// Exponentiate a nilpotent derivation read from a JSON matrix.
    Exp {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        map: PathBuf,
    },
    /// Build the 2-local counterexample and certify it on seeded pairs.
    Counterexample {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        pairs: u64,
        /// Coordinate function: `cubic` or `cubic+<c>`.
        #[arg(long, default_value = "cubic")]
        f: String,
    },
    /// Re-validate a stored certificate.
    Certify { certificate: PathBuf },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Builder spec such as `sl:3` or `heisenberg:2`.
    #[arg(long)]
    builder: Option<String>,
    /// Algebra document produced by `build`.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Either a file path or a builder spec.
    #[arg(long)]
    algebra: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("input error: {0}")]
    Input(String),
    #[error("validation failure")]
    Validation(Option<String>),
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        match e {
            LieError::NotDerivation(_)
            | LieError::NotNilpotent
            | LieError::NotAutomorphism(_)
            | LieError::WitnessInconsistent
            | LieError::NoNonadditivityWitness => Failure::Validation(Some(e.to_string())),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

impl Source {
    fn load(&self) -> Result<LieAlgebra, Failure> {
        let from_file = |p: &Path| -> Result<LieAlgebra, Failure> { Ok(load_algebra(&read(p)?)?) };
        match (&self.builder, &self.file, &self.algebra) {
            (Some(b), _, _) => Ok(build_from_spec(b)?),
            (_, Some(f), _) => from_file(f),
            (_, _, Some(a)) if Path::new(a).is_file() => from_file(Path::new(a)),
            (_, _, Some(a)) => Ok(build_from_spec(a)?),
            _ => Err(Failure::Input("no algebra source given".into())),
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, doc: &T) -> Outcome {
    let mut text = serde_json::to_string_pretty(doc).map_err(|e| Failure::Input(e.to_string()))?;
    text.push('\n');
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Analysis {
    schema_version: &'static str,
    dim: usize,
    semisimple: bool,
    nilpotent: bool,
    center_dim: usize,
    nilpotency_index: Option<usize>,
    solvable: bool,
    solvability_index: Option<usize>,
    derived_dim: usize,
    radical_dim: usize,
    labels: Vec<String>,
}

#[derive(Serialize)]
struct KillingReport {
    schema_version: &'static str,
    #[serde(with = "serde_matrix")]
    gram: Matrix,
    semisimple: bool,
    radical_dim: usize,
}

#[derive(Serialize)]
struct RootsReport<'a> {
    schema_version: &'static str,
    #[serde(flatten)]
    datum: &'a RootDatum,
    /// `alpha(d)` for each root, in root order.
    #[serde(with = "serde_scalars")]
    values_at_d: Vec<Scalar>,
    d_regular_semisimple: bool,
}

#[derive(Serialize)]
struct DerivationsReport {
    schema_version: &'static str,
    dim: usize,
    derivation_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<LinearMap>>,
}

#[derive(Serialize)]
struct ExpReport {
    schema_version: &'static str,
    nilpotency_order: usize,
    exp: LinearMap,
}

#[derive(Serialize)]
struct RevalidationReport {
    schema_version: &'static str,
    #[serde(flatten)]
    result: Revalidation,
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Build(src) => emit(cli, &AlgebraDocument::from_algebra(&src.load()?)),
        Command::Analyze(src) => {
            let l = src.load()?;
            let form = KillingForm::new(&l);
            let (nilpotent, nilpotency_index) = l.is_nilpotent();
            let (solvable, solvability_index) = l.is_solvable();
            emit(
                cli,
                &Analysis {
                    schema_version: SCHEMA_VERSION,
                    dim: l.dim(),
                    semisimple: form.is_nondegenerate(),
                    nilpotent,
                    center_dim: l.center().dim(),
                    nilpotency_index,
                    solvable,
                    solvability_index,
                    derived_dim: l.commutator_subalgebra().dim(),
                    radical_dim: form.radical().dim(),
                    labels: l.labels().to_vec(),
                },
            )
        }
        Command::Killing(src) => {
            let l = src.load()?;
            let form = KillingForm::new(&l);
            emit(
                cli,
                &KillingReport {
                    schema_version: SCHEMA_VERSION,
                    gram: form.gram().clone(),
                    semisimple: form.is_nondegenerate(),
                    radical_dim: form.radical().dim(),
                },
            )
        }
        Command::Roots(src) => {
            let l = src.load()?;
            let datum = root_datum(&l)?;
            let values_at_d = root_values_at(&datum, &datum.d)
                .ok_or_else(|| Failure::Input("d is not in the cartan subalgebra".into()))?;
            let d_regular_semisimple = is_regular_semisimple(&l, &datum.d, &datum.cartan)?;
            emit(
                cli,
                &RootsReport {
                    schema_version: SCHEMA_VERSION,
                    datum: &datum,
                    values_at_d,
                    d_regular_semisimple,
                },
            )
        }
        Command::Derivations { source, basis } => {
            let l = source.load()?;
            let space = derivation_space(&l);
            emit(
                cli,
                &DerivationsReport {
                    schema_version: SCHEMA_VERSION,
                    dim: l.dim(),
                    derivation_dim: space.len(),
                    basis: basis.then_some(space),
                },
            )
        }
        Command::Exp { source, map } => {
            let l = source.load()?;
            let d: LinearMap = serde_json::from_str(&read(map)?)
                .map_err(|e| Failure::Input(format!("cannot parse map: {e}")))?;
            if d.dim() != l.dim() {
                return Err(LieError::DimensionMismatch {
                    expected: l.dim(),
                    got: d.dim(),
                }
                .into());
            }
            let report = is_derivation(&l, &d)?;
            if !report.ok {
                return Err(LieError::NotDerivation(report.failing_pair).into());
            }
            let order = d.nilpotency_order().ok_or(LieError::NotNilpotent)?;
            let exp = exp_nilpotent(&l, &d)?;
            emit(
                cli,
                &ExpReport {
                    schema_version: SCHEMA_VERSION,
                    nilpotency_order: order,
                    exp,
                },
            )
        }
        Command::Counterexample { source, seed, pairs, f } => {
            let l = source.load()?;
            let f = CoordinateFn::parse(f)?;
            let count = usize::try_from(*pairs).map_err(|_| Failure::Input("pair count too large".into()))?;
            let doc = counterexample_document(&l, f, *seed, count)?;
            emit(cli, &doc)?;
            match doc.verdict {
                Verdict::Both => Ok(()),
                _ => Err(Failure::Validation(Some(format!(
                    "{} of {count} pairs have no witness",
                    doc.failures.len()
                )))),
            }
        }
        Command::Certify { certificate } => {
            let doc: CertificateDocument = serde_json::from_str(&read(certificate)?)
                .map_err(|e| Failure::Input(format!("cannot parse certificate: {e}")))?;
            let result = revalidate_document(&doc)?;
            let valid = result.valid;
            emit(
                cli,
                &RevalidationReport {
                    schema_version: SCHEMA_VERSION,
                    result,
                },
            )?;
            if valid {
                Ok(())
            } else {
                Err(Failure::Validation(None))
            }
        }
    }
}
