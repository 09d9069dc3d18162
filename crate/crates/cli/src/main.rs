//! splitmat: decompose square matrices into square-zero or idempotent
//! summands with machine-checkable certificates, verify certificate files,
//! report canonical similarity data and run the brute-force oracles.
//!
//! Exit codes: 0 success, 1 decomposition impossible or certificate failed
//! verification, 2 malformed input or violated precondition. Documents go to
//! stdout (and `--out` for decompose), diagnostics to stderr.

use clap::{Parser, Subcommand, ValueEnum};
use splitmat_cli::doc;
use splitmat_cli::doc::{
    field_to_doc, matrix_to_rows, print_pretty, CanonDocument, CertificateDocument, CheckDocument,
    DocError, EigenvalueCellsDoc, ElementaryDivisorDoc, MatrixDocument, ObstructionDoc,
    OracleDocument, VERSION,
};
use serde::Serialize;
use splitmat_core::{
    construct_two_idempotents_char2, construct_two_squarezero, decide_two_idempotents_char2,
    decide_two_squarezero, elementary_divisors, invariant_factors, jordan_size1_count,
    oracle_two_idempotents, oracle_two_squarezero, pad_three_idempotents_char2,
    pad_three_squarezero, sum_four_squarezero, three_squarezero_char2, Certificate, Matrix, Poly,
    Scalar,
};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "splitmat", version, about = "Exact matrix decompositions with certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the input matrix and write a certificate document.
    Decompose {
        #[arg(long, value_enum)]
        kind: DecomposeKind,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long = "out", value_name = "FILE")]
        output: PathBuf,
    },
    /// Re-verify a certificate document.
    Check {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Report invariant factors, elementary divisors and size-1 cell counts.
    Canon {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
    /// Exhaustive small-matrix decision, independent of the constructions.
    Oracle {
        #[arg(long, value_enum)]
        kind: OracleKind,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeKind {
    #[value(name = "sq2")]
    Sq2,
    #[value(name = "sq3pad")]
    Sq3pad,
    #[value(name = "sq3char2")]
    Sq3char2,
    #[value(name = "sq4")]
    Sq4,
    #[value(name = "idem2char2")]
    Idem2char2,
    #[value(name = "idem3pad")]
    Idem3pad,
}

impl DecomposeKind {
    fn name(self) -> &'static str {
        match self {
            DecomposeKind::Sq2 => "sq2",
            DecomposeKind::Sq3pad => "sq3pad",
            DecomposeKind::Sq3char2 => "sq3char2",
            DecomposeKind::Sq4 => "sq4",
            DecomposeKind::Idem2char2 => "idem2char2",
            DecomposeKind::Idem3pad => "idem3pad",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    #[value(name = "sq2")]
    Sq2,
    #[value(name = "idem2char2")]
    Idem2char2,
}

impl OracleKind {
    fn name(self) -> &'static str {
        match self {
            OracleKind::Sq2 => "sq2",
            OracleKind::Idem2char2 => "idem2char2",
        }
    }
}

struct CmdError {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> CmdError {
    CmdError { code: 2, message: message.into() }
}

fn from_core(e: splitmat_core::Error) -> CmdError {
    usage(e.to_string())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CmdError> {
    match cli.command {
        Command::Decompose { kind, input, output } => cmd_decompose(kind, &input, &output),
        Command::Check { input } => cmd_check(&input),
        Command::Canon { input } => cmd_canon(&input),
        Command::Oracle { kind, input } => cmd_oracle(kind, &input),
    }
}

fn read_text(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<Matrix, CmdError> {
    let text = read_text(path)?;
    let docm: MatrixDocument = serde_json::from_str(&text)
        .map_err(|e| usage(format!("cannot parse matrix document: {e}")))?;
    docm.to_matrix().map_err(|e| usage(e.to_string()))
}

fn emit<T: Serialize>(path: Option<&Path>, document: &T) -> Result<(), CmdError> {
    let text = print_pretty(document);
    if let Some(path) = path {
        fs::write(path, &text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{text}");
    Ok(())
}

fn construct(kind: DecomposeKind, m: &Matrix) -> splitmat_core::Result<Certificate> {
    match kind {
        DecomposeKind::Sq2 => construct_two_squarezero(m),
        DecomposeKind::Sq3pad => pad_three_squarezero(m),
        DecomposeKind::Sq3char2 => three_squarezero_char2(m),
        DecomposeKind::Sq4 => sum_four_squarezero(m),
        DecomposeKind::Idem2char2 => construct_two_idempotents_char2(m),
        DecomposeKind::Idem3pad => pad_three_idempotents_char2(m),
    }
}

fn cmd_decompose(kind: DecomposeKind, input: &Path, output: &Path) -> Result<u8, CmdError> {
    let m = read_matrix(input)?;
    let obstruction = match kind {
        DecomposeKind::Sq2 => {
            decide_two_squarezero(&m).map_err(from_core)?.failing_factor.map(|f| ObstructionDoc {
                invariant_factor: Some(f.to_string()),
                ..Default::default()
            })
        }
        DecomposeKind::Idem2char2 => decide_two_idempotents_char2(&m)
            .map_err(from_core)?
            .offending
            .map(|(p, e)| ObstructionDoc {
                elementary_divisor: Some(p.to_string()),
                exponent: Some(e),
                ..Default::default()
            }),
        _ => None,
    };
    if let Some(why) = obstruction {
        emit(Some(output), &CertificateDocument::impossible(kind.name(), &m, why))?;
        eprintln!("{} decomposition is impossible for this matrix", kind.name());
        return Ok(1);
    }
    let cert = match construct(kind, &m) {
        Ok(cert) => cert,
        Err(splitmat_core::Error::NotDecomposable(message)) => {
            let why = ObstructionDoc { note: Some(message.clone()), ..Default::default() };
            emit(Some(output), &CertificateDocument::impossible(kind.name(), &m, why))?;
            eprintln!("{} decomposition is impossible: {message}", kind.name());
            return Ok(1);
        }
        Err(e) => return Err(from_core(e)),
    };
    if let Some(failure) = cert.verify().failure {
        return Err(usage(format!("emitted certificate fails verification: {failure}")));
    }
    emit(Some(output), &CertificateDocument::from_certificate(kind.name(), &cert))?;
    Ok(0)
}

fn cmd_check(input: &Path) -> Result<u8, CmdError> {
    let text = read_text(input)?;
    let docc: CertificateDocument = serde_json::from_str(&text)
        .map_err(|e| usage(format!("cannot parse certificate document: {e}")))?;
    let failure = match docc.to_certificate() {
        Ok(cert) => cert.verify().failure,
        Err(DocError::Invalid(message)) => Some(message),
        Err(DocError::Malformed(message)) => return Err(usage(message)),
    };
    let verified = failure.is_none();
    let report = CheckDocument { version: VERSION.into(), verified, failure: failure.clone() };
    emit(None, &report)?;
    if let Some(failure) = failure {
        eprintln!("certificate does not verify: {failure}");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_canon(input: &Path) -> Result<u8, CmdError> {
    let m = read_matrix(input)?;
    let invariants = invariant_factors(&m).map_err(from_core)?;
    let eldivs = elementary_divisors(&m).map_err(from_core)?;
    let mut eigenvalues: Vec<Scalar> = Vec::new();
    for (base, _) in &eldivs {
        if base.degree() == Some(1) {
            let lambda = base.coeff(0).neg();
            if !eigenvalues.contains(&lambda) {
                eigenvalues.push(lambda);
            }
        }
    }
    let size1_cells = eigenvalues
        .iter()
        .map(|lambda| {
            Ok(EigenvalueCellsDoc {
                eigenvalue: doc::scalar_to_value(lambda),
                size1_cells: jordan_size1_count(&m, lambda).map_err(from_core)?,
            })
        })
        .collect::<Result<Vec<_>, CmdError>>()?;
    let report = CanonDocument {
        version: VERSION.into(),
        field: field_to_doc(m.field()),
        invariant_factors: invariants.iter().map(Poly::to_string).collect(),
        invariant_factor_coeffs: invariants.iter().map(poly_coeff_values).collect(),
        elementary_divisors: eldivs
            .iter()
            .map(|(base, exponent)| ElementaryDivisorDoc {
                base: base.to_string(),
                base_coeffs: poly_coeff_values(base),
                exponent: *exponent,
            })
            .collect(),
        size1_cells,
    };
    emit(None, &report)?;
    Ok(0)
}

fn poly_coeff_values(p: &Poly) -> Vec<serde_json::Value> {
    let degree = p.degree().expect("canonical polynomials are nonzero");
    (0..=degree).map(|i| doc::scalar_to_value(&p.coeff(i))).collect()
}

fn cmd_oracle(kind: OracleKind, input: &Path) -> Result<u8, CmdError> {
    let m = read_matrix(input)?;
    let found = match kind {
        OracleKind::Sq2 => oracle_two_squarezero(&m),
        OracleKind::Idem2char2 => oracle_two_idempotents(&m),
    }
    .map_err(from_core)?;
    let report = OracleDocument {
        version: VERSION.into(),
        kind: kind.name().into(),
        field: field_to_doc(m.field()),
        decomposable: found.is_some(),
        summands: found.map(|(x, y)| vec![matrix_to_rows(&x), matrix_to_rows(&y)]),
    };
    emit(None, &report)?;
    Ok(0)
}
