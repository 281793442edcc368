//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage, validation or contract errors,
//! 2 when an input file cannot be read or is malformed.
//!
//! Input flags taking `FILE` also accept inline JSON (a value starting with
//! `[` or `{`).

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebraic::{
    cyclotomic_poly, degree_check_cyclotomic, degree_check_real_subfield, euler_phi, real_cyclotomic_minpoly,
    CyclotomicDegreeReport, ExactValue, RatPolynomial, RealSubfieldDegreeReport,
};
use crate::error::{Error, Result};
use crate::formats;
use crate::independence::{
    assess_family, box_check, default_box_bound, m2, powers_family, prove_powers_m2, MatrixFamily,
};
use crate::linalg::IntMatrix;
use crate::literal::parse_rational;
use crate::measures::{
    finite_support_candidates, fourier, fourier_exact, is_invariant, support_within, FolnerSequence, FourierValue,
    IntegerSubset, MeasureSpec, TorusPointQ,
};
use crate::mixing::{
    orbit_measure, rigidity_harness, run_diagnostic, Diagnostic, DiagnosticsReport, DiagnosticsRequest,
    RigidityConfig,
};
use crate::tridiagonal::{
    det_closed_form, det_recurrence, eigenvalues_m2, make_matrix, rational_root_classification, ClosedFormReport,
    TridiagSpec, Variant,
};

#[derive(Parser, Debug)]
#[command(name = "torus-rigidity", version, about = "Strongly independent matrices and Fourier diagnostics on the n-torus")]
struct Cli {
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Tridiagonal families M_n(a), N_n(a)
    Tridiag {
        #[command(subcommand)]
        cmd: TridiagCmd,
    },
    /// Strong independence
    Si {
        #[command(subcommand)]
        cmd: SiCmd,
    },
    /// Cyclotomic and real-cyclotomic fields
    Field {
        #[command(subcommand)]
        cmd: FieldCmd,
    },
    /// Rational measures on the torus
    Measure {
        #[command(subcommand)]
        cmd: MeasureCmd,
    },
    /// Ergodic / mixing diagnostics and the rigidity harness
    Mix {
        #[command(subcommand)]
        cmd: MixCmd,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to FILE instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TridiagArgs {
    /// Matrix size
    #[arg(long)]
    n: usize,
    /// Diagonal entry (integer or p/q)
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    a: String,
    /// Family: M (last diagonal entry a-1) or N
    #[arg(long, default_value = "M")]
    variant: Variant,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SizeArgs {
    /// Size n of M_n(2)
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum TridiagCmd {
    /// Determinant by recurrence, fraction-free elimination and closed form
    Det(TridiagArgs),
    /// Characteristic polynomial det(tI - A)
    Charpoly(TridiagArgs),
    /// Eigenvalues of M_n(2) with minimal polynomials
    Eigen(SizeArgs),
    /// Rational roots of the characteristic polynomial of M_n(2)
    Classify(SizeArgs),
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Family JSON; defaults to the powers of M_n(2)
    #[arg(long, value_name = "FILE")]
    family: Option<String>,
    /// Size n of M_n(2) when no family is given
    #[arg(long)]
    n: Option<usize>,
    /// Box bound: vectors with entries in [-K, K]
    #[arg(long = "K", value_name = "K")]
    k: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum SiCmd {
    /// Eigenvalue-degree certificate for the powers of M_n(2)
    Prove(SizeArgs),
    /// Exhaustive search over a box of integer vectors
    Box(FamilyArgs),
    /// Box evidence combined with the certificate when it applies
    Report(FamilyArgs),
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Order m of the root of unity
    #[arg(long)]
    m: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct DegreeArgs {
    /// Single order m
    #[arg(long, conflicts_with = "max")]
    m: Option<u64>,
    /// All orders 3..=MAX
    #[arg(long)]
    max: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum FieldCmd {
    /// Cyclotomic polynomial Phi_m
    Cyclotomic(FieldArgs),
    /// Minimal polynomial of 2cos(2pi/m)
    Realmin(FieldArgs),
    /// Degree checks [Q(zeta_m):Q] = phi(m) and [Q(cos 2pi/m):Q] = phi(m)/2
    Degrees(DegreeArgs),
}

#[derive(Args, Debug)]
struct FourierArgs {
    #[arg(long, value_name = "FILE")]
    measure: String,
    /// Frequency k
    #[arg(long, value_name = "FILE")]
    vector: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct InvariantArgs {
    #[arg(long, value_name = "FILE")]
    measure: String,
    #[arg(long, value_name = "FILE")]
    matrix: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SupportArgs {
    /// Matrix L whose rows k satisfy mu^(k) = 1
    #[arg(long, value_name = "FILE")]
    matrix: String,
    /// Optional measure whose support is compared with the bound
    #[arg(long, value_name = "FILE")]
    measure: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    /// Starting point x0
    #[arg(long, value_name = "FILE")]
    point: String,
    #[arg(long, value_name = "FILE")]
    matrix: String,
    /// Orbit length
    #[arg(long = "N", value_name = "N")]
    big_n: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum MeasureCmd {
    /// Fourier coefficient mu^(k)
    Fourier(FourierArgs),
    /// Invariance under x -> A x
    Invariant(InvariantArgs),
    /// Finite support bound from a matrix of frequencies
    Support(SupportArgs),
    /// Empirical measure of an orbit
    Orbit(OrbitArgs),
}

#[derive(Args, Debug)]
struct FolnerArgs {
    /// interval, shifted, or a Folner JSON file
    #[arg(long, default_value = "interval", value_name = "interval|shifted|FILE")]
    folner: String,
    /// Offset of a shifted Folner sequence
    #[arg(long, default_value_t = 0)]
    offset: u64,
    /// Step of a shifted Folner sequence
    #[arg(long, default_value_t = 1)]
    step: u64,
}

#[derive(Args, Debug)]
struct DiagArgs {
    #[arg(long, value_name = "FILE")]
    measure: String,
    #[arg(long, value_name = "FILE")]
    matrix: String,
    #[arg(long, value_name = "FILE")]
    pairs: String,
    #[command(flatten)]
    folner: FolnerArgs,
    /// Number of partial averages
    #[arg(long = "N", value_name = "N", default_value_t = 1000)]
    big_n: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct RigidityArgs {
    #[arg(long, value_name = "FILE")]
    measure: String,
    #[arg(long, value_name = "FILE")]
    matrix: String,
    #[arg(long, value_name = "FILE")]
    family: String,
    /// Witness frequency k
    #[arg(long, value_name = "FILE")]
    witness: String,
    /// The set E of exponents; defaults to all of N
    #[arg(long, value_name = "FILE")]
    subset: Option<String>,
    #[command(flatten)]
    folner: FolnerArgs,
    /// Largest sampled exponent j
    #[arg(long, default_value_t = 64)]
    j_max: u64,
    /// Box bound for the independence evidence
    #[arg(long = "K", value_name = "K")]
    k: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand, Debug)]
enum MixCmd {
    /// Cesaro averages of mu^(k A^j + l) against mu^(k) mu^(l)
    Ergodic(DiagArgs),
    /// Cesaro averages of |mu^(k A^j + l) - mu^(k) mu^(l)|^2
    Weak(DiagArgs),
    /// Tail values mu^(k A^j + l)
    Strong(DiagArgs),
    /// Replays the rigidity argument on a concrete measure
    Rigidity(RigidityArgs),
}

/// Reads a `FILE` flag: inline JSON or a path.
fn read_input(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))
}

fn folner_from(args: &FolnerArgs) -> Result<FolnerSequence> {
    match args.folner.as_str() {
        "interval" => Ok(FolnerSequence::Interval),
        "shifted" => Ok(FolnerSequence::Shifted { offset: args.offset, step: args.step }),
        other => formats::parse_folner(&read_input(other)?),
    }
}

#[derive(Serialize, Deserialize)]
struct DetReport {
    n: usize,
    #[serde(with = "crate::literal::rational")]
    a: BigRational,
    variant: Variant,
    #[serde(with = "crate::literal::rational")]
    det: BigRational,
    #[serde(with = "opt_int")]
    det_fraction_free: Option<BigInt>,
    closed_form: Option<ClosedFormReport>,
    agree: bool,
}

mod opt_int {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::literal::IntLit;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|x| x.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Ok(Option::<IntLit>::deserialize(d)?.map(|x| x.0))
    }
}

#[derive(Serialize, Deserialize)]
struct CharpolyReport {
    n: usize,
    #[serde(with = "crate::literal::rational")]
    a: BigRational,
    variant: Variant,
    matrix: IntMatrix,
    /// Coefficients of `det(tI - A)`, constant term first.
    charpoly: RatPolynomial,
    display: String,
}

#[derive(Serialize, Deserialize)]
struct CyclotomicReport {
    m: u64,
    phi: u64,
    polynomial: RatPolynomial,
    display: String,
    degree: CyclotomicDegreeReport,
}

#[derive(Serialize, Deserialize)]
struct RealMinReport {
    m: u64,
    polynomial: RatPolynomial,
    display: String,
    degree: RealSubfieldDegreeReport,
}

#[derive(Serialize, Deserialize)]
struct DegreeRow {
    cyclotomic: CyclotomicDegreeReport,
    real_subfield: RealSubfieldDegreeReport,
}

#[derive(Serialize, Deserialize)]
struct DegreesReport {
    all_equal: bool,
    rows: Vec<DegreeRow>,
}

#[derive(Serialize, Deserialize)]
struct FourierReport {
    k: crate::linalg::IntRowVector,
    value: FourierValue,
    exact: Option<ExactValue>,
}

#[derive(Serialize, Deserialize)]
struct InvariantReport {
    matrix: IntMatrix,
    invariant: bool,
}

#[derive(Serialize, Deserialize)]
struct SupportReport {
    matrix: IntMatrix,
    candidates: Vec<TorusPointQ>,
    support_within: Option<bool>,
}

fn parse_a(s: &str) -> Result<BigRational> {
    parse_rational(s).map_err(|e| Error::Contract(format!("--a: {e}")))
}

fn family_from(args: &FamilyArgs) -> Result<MatrixFamily> {
    match (&args.family, args.n) {
        (Some(f), None) => formats::parse_family(&read_input(f)?),
        (None, Some(n)) => {
            if n == 0 {
                return Err(Error::Contract("n must be at least 1".into()));
            }
            powers_family(&m2(n)?, n)
        }
        _ => Err(Error::Contract("give exactly one of --family and --n".into())),
    }
}

fn json_of<T: Serialize>(report: &T) -> Result<Value> {
    serde_json::to_value(report).map_err(|e| Error::Contract(format!("serialization failed: {e}")))
}

enum Report {
    Plain(Value),
    Diagnostics(DiagnosticsReport),
}

fn dispatch(cli: Cli) -> Result<(Report, Output)> {
    use Report::Plain;
    Ok(match cli.group {
        Group::Tridiag { cmd } => match cmd {
            TridiagCmd::Det(t) => {
                let a = parse_a(&t.a)?;
                let spec = TridiagSpec::new(t.n, a.clone(), t.variant)?;
                let det = det_recurrence(&spec);
                let (det_fraction_free, closed_form) = if a.is_integer() {
                    (Some(make_matrix(&spec)?.det()?), Some(det_closed_form(&spec)?))
                } else {
                    (None, None)
                };
                let agree = det_fraction_free.as_ref().is_none_or(|d| BigRational::from_integer(d.clone()) == det)
                    && closed_form.as_ref().is_none_or(|c| c.value == det);
                let r = DetReport { n: t.n, a, variant: t.variant, det, det_fraction_free, closed_form, agree };
                (Plain(json_of(&r)?), t.output)
            }
            TridiagCmd::Charpoly(t) => {
                let a = parse_a(&t.a)?;
                let spec = TridiagSpec::new(t.n, a.clone(), t.variant)?;
                let matrix = make_matrix(&spec)?;
                let charpoly = matrix.char_poly()?;
                let display = charpoly.to_string();
                let r = CharpolyReport { n: t.n, a, variant: t.variant, matrix, charpoly, display };
                (Plain(json_of(&r)?), t.output)
            }
            TridiagCmd::Eigen(s) => (Plain(json_of(&eigenvalues_m2(s.n)?)?), s.output),
            TridiagCmd::Classify(s) => (Plain(json_of(&rational_root_classification(s.n)?)?), s.output),
        },
        Group::Si { cmd } => match cmd {
            SiCmd::Prove(s) => (Plain(json_of(&prove_powers_m2(s.n)?)?), s.output),
            SiCmd::Box(f) => {
                let fam = family_from(&f)?;
                let k = f.k.unwrap_or_else(|| default_box_bound(fam.n()));
                (Plain(json_of(&box_check(&fam, k)?)?), f.output)
            }
            SiCmd::Report(f) => {
                let fam = family_from(&f)?;
                let k = f.k.unwrap_or_else(|| default_box_bound(fam.n()));
                (Plain(json_of(&assess_family(&fam, k)?)?), f.output)
            }
        },
        Group::Field { cmd } => match cmd {
            FieldCmd::Cyclotomic(f) => {
                if f.m == 0 {
                    return Err(Error::Contract("m must be at least 1".into()));
                }
                let polynomial = cyclotomic_poly(f.m);
                let r = CyclotomicReport {
                    m: f.m,
                    phi: euler_phi(f.m),
                    display: polynomial.to_string(),
                    polynomial,
                    degree: degree_check_cyclotomic(f.m),
                };
                (Plain(json_of(&r)?), f.output)
            }
            FieldCmd::Realmin(f) => {
                let polynomial = real_cyclotomic_minpoly(f.m)?;
                let r = RealMinReport {
                    m: f.m,
                    display: polynomial.to_string(),
                    polynomial,
                    degree: degree_check_real_subfield(f.m)?,
                };
                (Plain(json_of(&r)?), f.output)
            }
            FieldCmd::Degrees(d) => {
                let range = match (d.m, d.max) {
                    (Some(m), None) => m..=m,
                    (None, Some(max)) => 3..=max,
                    _ => return Err(Error::Contract("give exactly one of --m and --max".into())),
                };
                let rows = range
                    .map(|m| {
                        Ok(DegreeRow {
                            cyclotomic: degree_check_cyclotomic(m),
                            real_subfield: degree_check_real_subfield(m)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let all_equal = rows.iter().all(|r| r.cyclotomic.equal && r.real_subfield.equal);
                (Plain(json_of(&DegreesReport { all_equal, rows })?), d.output)
            }
        },
        Group::Measure { cmd } => match cmd {
            MeasureCmd::Fourier(f) => {
                let mu = formats::parse_measure(&read_input(&f.measure)?)?;
                let k = formats::parse_vector(&read_input(&f.vector)?)?;
                let value = fourier(&mu, &k)?;
                let exact = match &mu {
                    MeasureSpec::Lebesgue { .. } => {
                        Some(ExactValue::Rational(BigRational::from_integer(BigInt::from(k.is_zero() as u8))))
                    }
                    MeasureSpec::Atomic(m) => match fourier_exact(m, &k) {
                        Ok(v) => Some(v.exact()),
                        Err(Error::Limit(_)) => None,
                        Err(e) => return Err(e),
                    },
                };
                (Plain(json_of(&FourierReport { k, value, exact })?), f.output)
            }
            MeasureCmd::Invariant(i) => {
                let mu = formats::parse_measure(&read_input(&i.measure)?)?;
                let matrix = formats::parse_matrix(&read_input(&i.matrix)?)?;
                let invariant = is_invariant(&mu, &matrix)?;
                (Plain(json_of(&InvariantReport { matrix, invariant })?), i.output)
            }
            MeasureCmd::Support(s) => {
                let matrix = formats::parse_matrix(&read_input(&s.matrix)?)?;
                let candidates = finite_support_candidates(&matrix)?;
                let within = match &s.measure {
                    Some(m) => match formats::parse_measure(&read_input(m)?)? {
                        MeasureSpec::Atomic(a) => Some(support_within(&a, &candidates)),
                        MeasureSpec::Lebesgue { .. } => Some(false),
                    },
                    None => None,
                };
                (Plain(json_of(&SupportReport { matrix, candidates, support_within: within })?), s.output)
            }
            MeasureCmd::Orbit(o) => {
                let x0 = formats::parse_point(&read_input(&o.point)?)?;
                let a = formats::parse_matrix(&read_input(&o.matrix)?)?;
                let m = orbit_measure(&x0, &a, o.big_n)?;
                (Plain(json_of(&MeasureSpec::Atomic(m))?), o.output)
            }
        },
        Group::Mix { cmd } => match cmd {
            MixCmd::Ergodic(d) => diagnostics(d, Diagnostic::Ergodic)?,
            MixCmd::Weak(d) => diagnostics(d, Diagnostic::WeakMixing)?,
            MixCmd::Strong(d) => diagnostics(d, Diagnostic::StrongMixing)?,
            MixCmd::Rigidity(r) => {
                let mu = formats::parse_measure(&read_input(&r.measure)?)?;
                let a = formats::parse_matrix(&read_input(&r.matrix)?)?;
                let fam = formats::parse_family(&read_input(&r.family)?)?;
                let k = formats::parse_vector(&read_input(&r.witness)?)?;
                let e = match &r.subset {
                    Some(s) => formats::parse_subset(&read_input(s)?)?,
                    None => IntegerSubset::All,
                };
                let sigma = folner_from(&r.folner)?;
                let config = RigidityConfig { j_max: r.j_max, box_bound: r.k, ..Default::default() };
                let report = rigidity_harness(&mu, &a, &fam, &e, &sigma, &k, &config)?;
                (Plain(json_of(&report)?), r.output)
            }
        },
    })
}

fn diagnostics(d: DiagArgs, diag: Diagnostic) -> Result<(Report, Output)> {
    let req = DiagnosticsRequest {
        measure: formats::parse_measure(&read_input(&d.measure)?)?,
        matrix: formats::parse_matrix(&read_input(&d.matrix)?)?,
        pairs: formats::parse_pairs(&read_input(&d.pairs)?)?,
        folner: folner_from(&d.folner)?,
        n_max: d.big_n,
    };
    Ok((Report::Diagnostics(run_diagnostic(&req, diag)?), d.output))
}

/// Partial averages of every pair, one block per pair in request order.
pub fn diagnostics_csv(report: &DiagnosticsReport) -> String {
    let mut s = String::from("N,average_re,average_im,target_re,target_im\n");
    for p in &report.pairs {
        for (i, z) in p.partial_averages.iter().enumerate() {
            writeln!(s, "{},{},{},{},{}", i + 1, z.re, z.im, p.target.re, p.target.im).expect("string write");
        }
    }
    s
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Any report as `key,value` rows over flattened JSON paths.
pub fn generic_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut s = String::from("key,value\n");
    for (k, v) in rows {
        writeln!(s, "{},{}", csv_field(&k), csv_field(&v)).expect("string write");
    }
    s
}

fn render(report: &Report, format: Format) -> Result<String> {
    let pretty = |v: &Value| serde_json::to_string_pretty(v).map(|s| s + "\n");
    let text = match (report, format) {
        (Report::Plain(v), Format::Json) => pretty(v),
        (Report::Diagnostics(d), Format::Json) => serde_json::to_string_pretty(d).map(|s| s + "\n"),
        (Report::Plain(v), Format::Csv) => return Ok(generic_csv(v)),
        (Report::Diagnostics(d), Format::Csv) => return Ok(diagnostics_csv(d)),
    };
    text.map_err(|e| Error::Contract(format!("serialization failed: {e}")))
}

fn exit_code(e: &Error) -> i32 {
    if e.is_parse() {
        2
    } else {
        1
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let shown = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(shown.as_bytes());
                1
            } else {
                let _ = out.write_all(shown.as_bytes());
                0
            };
        }
    };
    let result = dispatch(cli).and_then(|(report, output)| {
        let text = render(&report, output.format)?;
        match output.out {
            Some(path) => std::fs::write(&path, text)
                .map_err(|e| Error::Contract(format!("cannot write {}: {e}", path.display()))),
            None => out.write_all(text.as_bytes()).map_err(|e| Error::Contract(format!("cannot write output: {e}"))),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
