//! Command-line front end. `run` takes the full argument vector and returns
//! the exit code with everything that should be printed.

pub mod verify;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::base::BaseRing;
use crate::characters::{self, DeltaSeries, EigenformData};
use crate::delta::{base_derivation, c_pi, check_delta_axioms_sampled, DEFAULT_SEED};
use crate::error::Error;
use crate::graded::{self, GradedJson};
use crate::jet::{self, kummer, poly_to_json, PresentationJson};
use crate::poly::Poly;
use crate::witt::{self, WittVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "deltajet", version, about = "Witt vectors, p-derivations, jets and delta-characters")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

/// Shared numeric bounds and settings; every subcommand accepts them.
#[derive(Args, Debug, Clone)]
struct ConfigArgs {
    /// Residue characteristic.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Residue degree.
    #[arg(long, global = true)]
    f: Option<usize>,
    /// p-adic precision.
    #[arg(long = "N", global = true)]
    precision: Option<u32>,
    /// Series degree bound.
    #[arg(long = "D", global = true)]
    degree: Option<i64>,
    /// Witt length or jet order.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the DELTAJET_CACHE_DIR environment variable.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

/// Resolved settings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub p: u64,
    pub f: usize,
    pub precision: u32,
    pub degree: Option<i64>,
    pub n: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    pub format: Format,
}

impl Config {
    fn from_args(a: &ConfigArgs) -> Result<Config, String> {
        let c = Config {
            p: a.p.unwrap_or(3),
            f: a.f.unwrap_or(1),
            precision: a.precision.unwrap_or(6),
            degree: a.degree,
            n: a.n,
            cache_dir: a.cache_dir.clone(),
            seed: a.seed.unwrap_or(DEFAULT_SEED),
            format: a.format.unwrap_or(Format::Text),
        };
        if c.p < 2 || c.f == 0 || c.precision == 0 || c.degree.is_some_and(|d| d <= 0) {
            return Err("p, f, N and D must be positive".into());
        }
        if !crate::ring::is_prime(c.p) {
            return Err(format!("p = {} is not prime", c.p));
        }
        Ok(c)
    }

    fn base(&self) -> Result<Arc<BaseRing>, Failure> {
        Ok(BaseRing::new(self.p, self.f, self.precision)?)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Witt vector arithmetic over the integers.
    #[command(subcommand)]
    Witt(WittCmd),
    /// p-derivations of the base ring.
    #[command(subcommand)]
    Delta(DeltaCmd),
    /// Arithmetic jet spaces.
    #[command(subcommand)]
    Jet(JetCmd),
    /// Delta-character series.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Graded pieces of t^(q-1) = h and diamond weights.
    #[command(subcommand)]
    Graded(GradedCmd),
    /// Runs the property suites and prints a JSON report.
    Verify {
        /// Suite names, comma separated, or `all`.
        #[arg(long, default_value = "all", value_delimiter = ',')]
        suite: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct Coords {
    /// Comma-separated integer coordinates x_0,...,x_n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    coords: Vec<BigInt>,
}

#[derive(Args, Debug)]
struct TwoCoords {
    #[command(flatten)]
    x: Coords,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    other: Vec<BigInt>,
}

#[derive(Subcommand, Debug)]
enum WittCmd {
    Ghost(Coords),
    Add(TwoCoords),
    Mul(TwoCoords),
    Frob(Coords),
    /// Prints the universal polynomials for (p, f, n).
    Polys,
}

#[derive(Subcommand, Debug)]
enum DeltaCmd {
    /// The sum-law correction polynomial (X^q + Y^q - (X + Y)^q)/p.
    Cpi,
    /// Samples the delta-ring axioms on the base ring.
    Check {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Perturbs delta first; the check is then expected to fail.
        #[arg(long)]
        corrupt: bool,
    },
}

#[derive(Args, Debug)]
struct JsonInput {
    /// Path of a JSON file, or `-` for standard input.
    #[arg(long, conflicts_with = "json")]
    input: Option<PathBuf>,
    /// Inline JSON.
    #[arg(long)]
    json: Option<String>,
}

impl JsonInput {
    fn read(&self) -> Result<String, Failure> {
        match (&self.input, &self.json) {
            (_, Some(s)) => Ok(s.clone()),
            (Some(path), None) if path.as_os_str() == "-" => {
                std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::usage(e.to_string()))
            }
            (Some(path), None) => {
                std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
            }
            (None, None) => Err(Failure::usage("one of --input or --json is required")),
        }
    }

    fn parse<T: serde::de::DeserializeOwned>(&self) -> Result<T, Failure> {
        serde_json::from_str(&self.read()?).map_err(|e| Failure::usage(format!("bad JSON input: {e}")))
    }
}

#[derive(Subcommand, Debug)]
enum JetCmd {
    /// Jet presentation of {vars, relations} with the tables of u and phi.
    Emit(JsonInput),
    /// Prolongations of t for the cover t^m = h.
    Kummer {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCmd {
    Psi,
    Fpartial,
    Fsharp {
        /// Weierstrass coefficients a1,a2,a3,a4,a6.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "eigenvalues")]
        curve: Option<Vec<i64>>,
        /// Prime at which the series is built; defaults to --p.
        #[arg(long)]
        prime: Option<u64>,
        /// JSON array a_1, a_2, ..., inline or `@path`.
        #[arg(long)]
        eigenvalues: Option<String>,
    },
}

#[derive(Args, Debug)]
struct GradedArgs {
    /// The unit h of t^(q-1) = h.
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    h: i64,
    #[command(flatten)]
    input: JsonInput,
}

#[derive(Subcommand, Debug)]
enum GradedCmd {
    Decompose(GradedArgs),
    Eigenweight(GradedArgs),
}

/// Why a command did not succeed.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::AxiomViolation { .. } | Error::NotEigen { .. } => Failure::check(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let config = match Config::from_args(&cli.config) {
        Ok(c) => c,
        Err(e) => return (2, format!("error: {e}\n")),
    };
    if let Some(dir) = &config.cache_dir {
        witt::set_cache_dir(Some(dir.clone()));
    }
    match dispatch(&cli.command, &config) {
        Ok((code, out)) => (code, out),
        Err(f) => (f.code, format!("error: {}\n", f.message)),
    }
}

type Outcome = Result<(i32, String), Failure>;

fn ok(s: String) -> Outcome {
    Ok((0, s))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cmd: &Command, cfg: &Config) -> Outcome {
    match cmd {
        Command::Witt(w) => witt_cmd(w, cfg),
        Command::Delta(d) => delta_cmd(d, cfg),
        Command::Jet(j) => jet_cmd(j, cfg),
        Command::Series(s) => series_cmd(s, cfg),
        Command::Graded(g) => graded_cmd(g, cfg),
        Command::Verify { suite } => {
            let report = verify::run_suites(suite, cfg.seed).map_err(Failure::usage)?;
            Ok((if report.passed { 0 } else { 1 }, to_json(&report)))
        }
    }
}

fn witt_vector(cfg: &Config, coords: &[BigInt]) -> Result<WittVector<BigInt>, Failure> {
    if let Some(n) = cfg.n {
        if coords.len() != n + 1 {
            return Err(Failure::usage(format!("--n {n} needs {} coordinates, got {}", n + 1, coords.len())));
        }
    }
    Ok(WittVector::new(cfg.p, cfg.f, coords.to_vec())?)
}

fn int_list(cfg: &Config, xs: &[BigInt]) -> String {
    match cfg.format {
        Format::Json => to_json(&xs.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        Format::Text => {
            let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            format!("({})\n", parts.join(", "))
        }
    }
}

fn int_poly_json(f: &Poly<BigInt>) -> serde_json::Value {
    f.terms()
        .iter()
        .map(|(m, c)| json!({"monomial": m.exps(), "coeff": c.to_string()}))
        .collect()
}

fn witt_cmd(cmd: &WittCmd, cfg: &Config) -> Outcome {
    match cmd {
        WittCmd::Ghost(c) => ok(int_list(cfg, &witt_vector(cfg, &c.coords)?.ghost())),
        WittCmd::Add(c) | WittCmd::Mul(c) => {
            let x = witt_vector(cfg, &c.x.coords)?;
            let y = witt_vector(cfg, &c.other)?;
            if x.n() != y.n() {
                return Err(Failure::usage("both vectors need the same length"));
            }
            let z = if matches!(cmd, WittCmd::Add(_)) { x.witt_add(&y) } else { x.witt_mul(&y) };
            ok(int_list(cfg, z.coords()))
        }
        WittCmd::Frob(c) => ok(int_list(cfg, witt_vector(cfg, &c.coords)?.frobenius()?.coords())),
        WittCmd::Polys => {
            let n = cfg.n.unwrap_or(1);
            let u = witt::universal_polys(cfg.p, cfg.f, n)?;
            match cfg.format {
                Format::Json => {
                    let families: serde_json::Map<String, serde_json::Value> = u
                        .families()
                        .iter()
                        .map(|(name, polys)| (name.to_string(), polys.iter().map(int_poly_json).collect()))
                        .collect();
                    ok(to_json(&json!({"p": u.p, "f": u.f, "n": u.n, "families": families})))
                }
                Format::Text => {
                    let mut out = String::new();
                    for (name, polys) in u.families() {
                        for (i, poly) in polys.iter().enumerate() {
                            out.push_str(&format!("{name}[{i}] = {poly:?}\n"));
                        }
                    }
                    ok(out)
                }
            }
        }
    }
}

fn delta_cmd(cmd: &DeltaCmd, cfg: &Config) -> Outcome {
    match cmd {
        DeltaCmd::Cpi => {
            let c = c_pi(cfg.p, cfg.f)?;
            match cfg.format {
                Format::Json => ok(to_json(&json!({"p": c.p, "q": c.q, "poly": int_poly_json(&c.poly)}))),
                Format::Text => ok(format!("{:?}\n", c.poly)),
            }
        }
        DeltaCmd::Check { samples, corrupt } => {
            let ring = cfg.base()?;
            let mut d = base_derivation(&ring);
            if *corrupt {
                d = d.corrupted();
            }
            let report = check_delta_axioms_sampled(&d, *samples, cfg.seed, |r| ring.random(r))?;
            Ok((if report.passed() { 0 } else { 1 }, to_json(&report.laws)))
        }
    }
}

fn jet_cmd(cmd: &JetCmd, cfg: &Config) -> Outcome {
    let base = cfg.base()?;
    let n = cfg.n.unwrap_or(1);
    match cmd {
        JetCmd::Emit(input) => {
            let pres: PresentationJson = input.parse()?;
            let j = jet::jet_presentation(&pres.to_affine(&base)?, n)?;
            ok(to_json(&j.to_json()?))
        }
        JetCmd::Kummer { m } => {
            let kj = kummer::kummer_jet(&base, *m, n)?;
            let checked = kj.check()?;
            let solved: Vec<serde_json::Value> = kj
                .solved
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let pieces: serde_json::Map<String, serde_json::Value> = x
                        .coeffs()
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(r, c)| (r.to_string(), serde_json::to_value(poly_to_json(c)).expect("json")))
                        .collect();
                    json!({"var": format!("t{}", "'".repeat(i + 1)), "coeffs": pieces})
                })
                .collect();
            ok(to_json(&json!({
                "degree": kj.degree(),
                "order": kj.order(),
                "vars": kj.base_vars(),
                "solved": solved,
                "relations_checked": checked,
            })))
        }
    }
}

fn series_out(cfg: &Config, s: &DeltaSeries) -> String {
    let terms = s.to_json();
    match cfg.format {
        Format::Json => to_json(&terms),
        Format::Text => {
            let mut out = String::new();
            if let Some(w) = &s.weight {
                out.push_str(&format!("# weight {w}\n"));
            }
            for t in terms {
                let m = t.monomial;
                out.push_str(&format!("{} * q^{} q'^{} q''^{}\n", t.coeff, m.q, m.q1, m.q2));
            }
            out
        }
    }
}

fn eigenvalues(src: &str, p: u64) -> Result<EigenformData, Failure> {
    let text = match src.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?,
        None => src.to_string(),
    };
    let coeffs: Vec<i64> = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("bad eigenvalue array: {e}")))?;
    Ok(EigenformData::new(p, coeffs, None)?)
}

fn series_cmd(cmd: &SeriesCmd, cfg: &Config) -> Outcome {
    match cmd {
        SeriesCmd::Psi => {
            let base = cfg.base()?;
            ok(series_out(cfg, &characters::psi_series(&base, cfg.degree.unwrap_or(12))?))
        }
        SeriesCmd::Fpartial => ok(series_out(cfg, &characters::f_partial_series(&cfg.base()?))),
        SeriesCmd::Fsharp { curve, prime, eigenvalues: ev } => {
            let p = prime.unwrap_or(cfg.p);
            let base = BaseRing::new(p, 1, cfg.precision)?;
            let d = cfg.degree.unwrap_or(20);
            let data = match (curve, ev) {
                (Some(c), None) => {
                    let c: characters::Curve = c.as_slice().try_into().map_err(|_| Failure::usage("--curve needs 5 values"))?;
                    EigenformData::from_curve(&c, p, d as usize)?
                }
                (None, Some(src)) => eigenvalues(src, p)?,
                _ => return Err(Failure::usage("one of --curve or --eigenvalues is required")),
            };
            ok(series_out(cfg, &characters::f_sharp_series(&data, &base, d)?))
        }
    }
}

fn graded_cmd(cmd: &GradedCmd, cfg: &Config) -> Outcome {
    let (GradedCmd::Decompose(args) | GradedCmd::Eigenweight(args)) = cmd;
    let ring = cfg.base()?;
    let alg = graded::kummer_over_base(&ring, ring.from_int(args.h))?;
    let input: GradedJson = args.input.parse()?;
    let elem = graded::reassemble(&alg, &input.to_graded(&alg)?)?;
    match cmd {
        GradedCmd::Decompose(_) => {
            let g = graded::tau_decompose(&elem);
            let pieces: Vec<serde_json::Value> = g
                .components
                .iter()
                .map(|(r, c)| json!({"r": r, "weight": format!("-{r} mod {}", g.m), "coeff": jet::coeff_to_json(c)}))
                .collect();
            ok(to_json(&json!({"m": g.m, "pieces": pieces})))
        }
        GradedCmd::Eigenweight(_) => {
            let k = graded::eigenweight(&elem)?;
            match cfg.format {
                Format::Json => ok(to_json(&json!({"eigenweight": k.to_string()}))),
                Format::Text => ok(format!("{k}\n")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &str) -> (i32, String) {
        run(std::iter::once("deltajet").chain(args.split_whitespace()))
    }

    #[test]
    fn ghost_example() {
        assert_eq!(call("witt ghost --p 3 --n 1 --coords 1,1"), (0, "(1, 4)\n".into()));
        assert_eq!(call("witt ghost --p 3 --coords 1,1 --format json").1, "[\n  \"1\",\n  \"4\"\n]\n");
    }

    #[test]
    fn witt_arithmetic() {
        // ghost (1, 4) + (2, 2^3 + 3 * 0) = (3, 12) = ghost of (3, (12 - 27)/3)
        assert_eq!(call("witt add --p 3 --coords 1,1 --other 2,0").1, "(3, -5)\n");
        assert_eq!(call("witt frob --p 3 --coords 1,1").1, "(4)\n");
        let (code, out) = call("witt polys --p 2 --n 1");
        assert_eq!(code, 0);
        assert!(out.starts_with("sum[0]"));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call("witt ghost --p 3 --n 2 --coords 1,1").0, 2);
        assert_eq!(call("nonsense").0, 2);
        assert_eq!(call("witt ghost --p 4 --coords 1").0, 2);
        assert_eq!(call("verify --suite nope").0, 2);
        assert_eq!(call("series fsharp --p 3").0, 2);
        assert_eq!(call("--help").0, 0);
    }

    #[test]
    fn delta_check_and_control() {
        let (code, out) = call("delta check --p 3 --N 4 --samples 50");
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("\"violations\": 0"));
        let (code, out) = call("delta check --p 3 --N 4 --samples 50 --corrupt");
        assert_eq!(code, 1);
        assert!(out.contains("witness"));
        assert_eq!(call("delta cpi --p 2").1, call("delta cpi --p 2").1);
    }

    #[test]
    fn psi_starts_with_one() {
        let (code, out) = call("series psi --p 3 --N 6 --D 12 --format json");
        assert_eq!(code, 0);
        let terms: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
        assert_eq!(terms.len(), 12);
        assert_eq!(terms[0]["monomial"], json!({"q": -3, "q1": 1, "q2": 0}));
        assert_eq!(terms[0]["coeff"], "1");
    }

    #[test]
    fn fsharp_from_curve_and_eigenvalues() {
        let from_curve = call("series fsharp --curve 0,-1,1,-10,-20 --prime 3 --N 4 --D 6");
        assert_eq!(from_curve.0, 0, "{}", from_curve.1);
        let a = crate::characters::curve_coefficients(&verify::CURVE_11A, 6).unwrap();
        let list = serde_json::to_string(&a).unwrap();
        let args = ["deltajet", "series", "fsharp", "--p", "3", "--N", "4", "--D", "6", "--eigenvalues", &list];
        assert_eq!(run(args), from_curve);
    }

    #[test]
    fn jet_commands() {
        let input = r#"{"vars":["x"],"relations":[[{"monomial":[2],"coeff":"1"},{"monomial":[0],"coeff":"-7"}]]}"#;
        let args = ["deltajet", "jet", "emit", "--p", "5", "--N", "3", "--json", input];
        let (code, out) = run(args);
        assert_eq!(code, 0, "{out}");
        let p: PresentationJson = serde_json::from_str(&out).unwrap();
        assert_eq!(p.vars, vec!["x", "x'"]);
        assert_eq!(p.relations.len(), 2);
        let (code, out) = call("jet kummer --p 5 --m 4 --N 3");
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("\"relations_checked\": 2"));
        assert_eq!(call("jet kummer --p 5 --m 5 --N 3").0, 2);
    }

    #[test]
    fn graded_commands() {
        let args = ["deltajet", "graded", "eigenweight", "--p", "7", "--N", "3", "--json", r#"{"coeffs":{"1":"3"}}"#];
        assert_eq!(run(args), (0, "5\n".into()));
        let args = ["deltajet", "graded", "eigenweight", "--p", "7", "--N", "3", "--json", r#"{"coeffs":{"1":"3","2":"1"}}"#];
        assert_eq!(run(args).0, 1);
        let args = ["deltajet", "graded", "decompose", "--p", "5", "--N", "2", "--json", r#"{"coeffs":{"0":"1","3":"24"}}"#];
        let (code, out) = run(args);
        assert_eq!(code, 0);
        assert!(out.contains("\"weight\": \"-3 mod 4\""));
    }
}
