mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use g2forms::f2::{self, DEFAULT_ENUM_CAP};
use g2forms::stable::{self, Orbit6, Orbit7Kind, OrientedPlane};
use g2forms::{Error, KForm, Scalar};
use serde_json::{json, Value};

use report::{big_number, InputDigest, Report};

const CAP_VAR: &str = "G2FORMS_ENUM_CAP";

#[derive(Parser)]
#[command(name = "g2forms", version, about = "Exact algebra of stable 3-forms in dimensions 6 and 7")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit of a 3-form on R^6 or R^7 read from a KForm JSON file
    Classify { path: PathBuf },
    /// Split a split-G2 form along the kernel of a covector
    Decompose {
        path: PathBuf,
        /// Comma-separated rationals c1,...,c7
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
    /// Exchange G2 and split-G2 forms along a calibrated 3-plane
    Swap {
        path: PathBuf,
        /// Three comma-separated vectors joined by semicolons
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
    },
    /// Number of k-dimensional subspaces of F_q^n
    Grassmann {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Also list every subspace (q = 2 only) and compare
        #[arg(long)]
        brute_force: bool,
    },
    /// Homotopy-class counts of SL(3,C) and extendible SL(3,R)^2 forms on T^n
    TorusClasses {
        #[arg(long)]
        n: u32,
    },
    /// Pointwise extension test for a (rho, omega) pair on R^6
    ExtendCheck { rho: PathBuf, omega: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::InvalidParameter(_) | Error::UnknownName(_) | Error::LinearlyDependent => 2,
            Error::UnsupportedShape(_)
            | Error::DimensionMismatch { .. }
            | Error::DegreeOverflow { .. }
            | Error::WrongOrbit { .. } => 3,
            Error::NullHyperplane => 4,
            Error::SizeLimit(_) => 5,
            Error::NotCalibrated => 6,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<Value, Failure>;

fn read_file(path: &Path, digest: &mut InputDigest) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    digest.field("file", text.as_bytes());
    Ok(text)
}

fn read_form(path: &Path, digest: &mut InputDigest) -> Result<KForm, Failure> {
    let text = read_file(path, digest)?;
    KForm::from_json(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn parse_vector(text: &str) -> Result<Vec<Scalar>, Failure> {
    text.split(',')
        .map(|c| c.trim().parse::<Scalar>().map_err(|e| Failure::new(2, format!("{c:?}: {e}"))))
        .collect()
}

fn form_shape(f: &KForm) -> (usize, usize) {
    (f.dim(), f.degree())
}

fn classify(path: &Path, digest: &mut InputDigest) -> CmdResult {
    let form = read_form(path, digest)?;
    match form_shape(&form) {
        (7, 3) => {
            let b = stable::induced_bilinear7(&form)?;
            let orbit = stable::classify7(&form)?;
            Ok(json!({
                "dim": 7,
                "orbit": orbit.name(),
                "reversed": orbit.reversed,
                "signature": b.signature(),
            }))
        }
        (6, 3) => Ok(json!({
            "dim": 6,
            "orbit": stable::classify6(&form)?,
            "lambda": stable::hitchin_lambda(&form)?,
        })),
        (n, k) => Err(Failure::new(3, format!("cannot classify a {k}-form on R^{n}"))),
    }
}

fn decompose(path: &Path, theta: &str, digest: &mut InputDigest) -> CmdResult {
    let form = read_form(path, digest)?;
    digest.field("theta", theta.as_bytes());
    let theta = parse_vector(theta)?;
    let split = stable::hyperplane_split(&form, &theta)?;
    let check = stable::check_extension(&split.rho, &split.omega)?;
    Ok(json!({
        "type": split.kind,
        "theta": split.theta,
        "normal": split.normal,
        "omega": split.omega,
        "rho": split.rho,
        "rho_orbit": check.orbit,
        "signature": check.signature,
        "omega_cubed": check.omega_cubed,
        "mixed_part_cubed": check.mixed_part_cubed,
        "admissible": check.admissible,
    }))
}

fn swap(path: &Path, plane: &str, digest: &mut InputDigest) -> CmdResult {
    let form = read_form(path, digest)?;
    digest.field("plane", plane.as_bytes());
    let vectors = plane.split(';').map(parse_vector).collect::<Result<Vec<_>, _>>()?;
    if vectors.len() != 3 {
        return Err(Failure::new(2, format!("a plane needs 3 vectors, got {}", vectors.len())));
    }
    let plane = OrientedPlane::new(vectors)?;
    let before = stable::classify7(&form)?;
    let swapped = stable::swap(&form, &plane)?;
    let after = stable::classify7(&swapped)?;
    let calibrated = match after.kind {
        Orbit7Kind::G2 => stable::is_calibrated(&swapped, &plane)?,
        _ => stable::is_positively_calibrated(&swapped, &plane)?,
    };
    Ok(json!({
        "input_orbit": before.name(),
        "orbit": after.name(),
        "form": swapped,
        "plane_calibrated": calibrated,
    }))
}

fn enum_cap() -> Result<u64, Failure> {
    match std::env::var(CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::new(2, format!("{CAP_VAR}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn grassmann(q: u64, n: u32, k: u32, brute_force: bool) -> CmdResult {
    let count = f2::grassmann_count(q, n, k)?;
    let mut enumerated = Value::Null;
    let mut verified = false;
    if brute_force {
        if q != 2 {
            return Err(Failure::new(5, format!("brute force is only available for q = 2, got q = {q}")));
        }
        let list = f2::grassmann_enumerate_capped(n as usize, k as usize, enum_cap()?)
            .map_err(|e| Failure::new(5, e.to_string()))?;
        verified = count == (list.len() as u64).into();
        enumerated = big_number(list.len());
    }
    Ok(json!({
        "q": q,
        "n": n,
        "k": k,
        "count": big_number(count),
        "enumerated": enumerated,
        "brute_force_verified": verified,
    }))
}

fn torus_classes(n: u32) -> CmdResult {
    let slc = f2::count_slc_classes(n)?;
    let planes = if n >= 2 { f2::grassmann_count(2, n, 2)? } else { 0u32.into() };
    let extendible = planes + 1u32;
    // the Plücker image is listed when small enough to do so quickly
    let enumerated = if n <= 10 {
        big_number(f2::count_extendible_slr_classes(n as usize)?)
    } else {
        Value::Null
    };
    Ok(json!({
        "n": n,
        "slc": big_number(slc),
        "extendible_slr": big_number(&extendible),
        "extendible_slr_enumerated": enumerated,
    }))
}

fn extend_check(rho: &Path, omega: &Path, digest: &mut InputDigest) -> CmdResult {
    let rho = read_form(rho, digest)?;
    let omega = read_form(omega, digest)?;
    if form_shape(&rho) != (6, 3) || form_shape(&omega) != (6, 2) {
        return Err(Failure::new(3, "expected a 3-form and a 2-form on R^6"));
    }
    if stable::classify6(&rho)? == Orbit6::Degenerate {
        return Err(Failure::new(3, "rho is degenerate"));
    }
    let check = stable::check_extension(&rho, &omega)?;
    let mut value = serde_json::to_value(&check).expect("serializable");
    value["lambda"] = serde_json::to_value(stable::hitchin_lambda(&rho)?).expect("serializable");
    Ok(value)
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let (name, mut digest) = match &cli.command {
        Command::Classify { .. } => ("classify", InputDigest::new("classify")),
        Command::Decompose { .. } => ("decompose", InputDigest::new("decompose")),
        Command::Swap { .. } => ("swap", InputDigest::new("swap")),
        Command::Grassmann { .. } => ("grassmann", InputDigest::new("grassmann")),
        Command::TorusClasses { .. } => ("torus-classes", InputDigest::new("torus-classes")),
        Command::ExtendCheck { .. } => ("extend-check", InputDigest::new("extend-check")),
    };
    let result = match &cli.command {
        Command::Classify { path } => classify(path, &mut digest)?,
        Command::Decompose { path, theta } => decompose(path, theta, &mut digest)?,
        Command::Swap { path, plane } => swap(path, plane, &mut digest)?,
        Command::Grassmann { q, n, k, brute_force } => {
            digest.field("args", format!("{q} {n} {k} {brute_force}").as_bytes());
            grassmann(*q, *n, *k, *brute_force)?
        }
        Command::TorusClasses { n } => {
            digest.field("args", n.to_string().as_bytes());
            torus_classes(*n)?
        }
        Command::ExtendCheck { rho, omega } => extend_check(rho, omega, &mut digest)?,
    };
    Ok(Report { command: name, inputs_digest: digest.finish(), result, exact: true })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("serializable");
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
