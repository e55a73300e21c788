//! Command-line front end. `run` parses argv, dispatches to the library and
//! writes JSON (or flattened key/value tables) to `out`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::approx::{analyze_dependence_bounded, approximate_with};
use crate::config::{Config, Output};
use crate::dirichlet::{class_number_bounded, fundamental_unit, log_embedding, sunit_basis_bounded};
use crate::error::{Error, Result};
use crate::field::{parse_field, QuadraticField};
use crate::height::{function_of_product, height, integral, lp_norm, Norm};
use crate::obstruction::obstruct;
use crate::operators::{project_k, project_s};
use crate::parse::{parse_formal_product, parse_place_set, parse_target};
use crate::places::{abs_value, places_above, RationalPlace};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const SET_HELP: &str = "Set of places: FIELD:ITEM,... with FIELD one of Q, Q(i), Q(sqrt(d)) and ITEM one of \
inf (all archimedean places), inf0/inf1 (one real place of a real quadratic field), p (the fiber above p), \
pa/pb (one place above a split p, in residue order) or (x) (primes dividing x). Examples: \"Q:2,3,inf\", \
\"Q(i):5a,5b,2\", \"Q(i):(2-i)\".";

#[derive(Parser, Debug)]
#[command(name = "algsunit", version, about = "S-units as step functions on places", after_help = SET_HELP)]
struct Cli {
    /// json or table
    #[arg(long, global = true, default_value = "json")]
    output: Output,
    /// Largest |discriminant| for which class numbers are computed
    #[arg(long, global = true, default_value_t = 400)]
    disc_bound: i64,
    /// Tolerance for support and zero-integral checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Largest denominator tried by `approx`
    #[arg(long, global = true, default_value_t = 1_000_000)]
    n_max: u64,
    /// Seed for randomized suites and sample families
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Field invariants, and arithmetic of one element
    Field(FieldArgs),
    /// Places above a rational place, a set of places, or the function f_x
    Places(PlacesArgs),
    /// Weil height h(g) = ||f_g||_1 / 2 of an element or power product
    Height(HeightArgs),
    /// P_S or P_K of a step function
    Project(ProjectArgs),
    /// S-unit basis and its logarithmic embedding
    Sunits(SetArgs),
    /// Approximate a zero-integral target on S by f_g with g in F(S)
    Approx(ApproxArgs),
    /// Exact rational dependence among power products
    Deps(DepsArgs),
    /// Relation search and distance certificates for S avoiding infinity
    Obstruct(ObstructArgs),
    /// Run the property suite
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[arg(long)]
    field: String,
    #[arg(long)]
    elem: Option<String>,
    /// Also print elem^pow
    #[arg(long, allow_hyphen_values = true)]
    pow: Option<i64>,
}

#[derive(Args, Debug)]
struct PlacesArgs {
    #[arg(long)]
    field: Option<String>,
    /// A prime p, or "inf"
    #[arg(long)]
    over: Option<String>,
    #[arg(long)]
    elem: Option<String>,
    #[arg(long = "S")]
    set: Option<String>,
}

#[derive(Args, Debug)]
struct HeightArgs {
    #[arg(long)]
    field: String,
    /// An element such as "2-i", or a power product "(2-i)^(1/2)*3"
    #[arg(long)]
    elem: String,
    /// Also report ||f||_p for p = 1, 2, inf
    #[arg(long)]
    norms: bool,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    /// s or k
    #[arg(long, default_value = "s")]
    op: String,
    /// The set S (for P_S)
    #[arg(long = "S")]
    set: Option<String>,
    /// Field of the target (for P_K; defaults to the base of S)
    #[arg(long)]
    field: Option<String>,
    /// Target down to which P_K averages (only Q)
    #[arg(long, default_value = "Q")]
    to: String,
    /// JSON: a place-function or a map from place labels to values
    #[arg(long)]
    target: String,
}

#[derive(Args, Debug)]
struct SetArgs {
    #[arg(long = "S")]
    set: String,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    #[arg(long = "S")]
    set: String,
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// 1, 2 or inf
    #[arg(long, default_value = "1")]
    p: Norm,
    /// Write the (N, error) trace as CSV
    #[arg(long)]
    trace_csv: Option<PathBuf>,
    /// Replace the target by its P_S projection first
    #[arg(long)]
    project: bool,
}

#[derive(Args, Debug)]
struct DepsArgs {
    #[arg(long = "S")]
    set: String,
    /// One power product per flag
    #[arg(long = "g", required = true)]
    products: Vec<String>,
}

#[derive(Args, Debug)]
struct ObstructArgs {
    #[arg(long = "S")]
    set: String,
    /// Exponent bound for the exhaustive relation search
    #[arg(long, default_value_t = 10)]
    bound: i64,
    /// Random products added to the sample family
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run only this check (1-10)
    #[arg(long)]
    check: Option<u8>,
}

/// Parses argv (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let config = Config { disc_bound: cli.disc_bound, tolerance: cli.tolerance, n_max: cli.n_max, output: cli.output };
    match config.validate().and_then(|_| dispatch(&cli, &config)) {
        Ok((value, code)) => {
            let text = match config.output {
                Output::Json => serde_json::to_string_pretty(&value).expect("serializable") + "\n",
                Output::Table => table(&value),
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_FAILURE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Violation(_) => EXIT_FAILURE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn dispatch(cli: &Cli, config: &Config) -> Result<(Value, i32)> {
    let ok = |v: Value| Ok((v, EXIT_OK));
    match &cli.command {
        Command::Field(a) => ok(field_info(a, config)?),
        Command::Places(a) => ok(places_info(a)?),
        Command::Height(a) => {
            let field = parse_field(&a.field)?;
            let g = parse_formal_product(field, &a.elem)?;
            let f = function_of_product(&g)?;
            let mut v = json!({ "h": height(&f) });
            if a.norms {
                v["norms"] = json!({
                    "1": lp_norm(&f, Norm::L1),
                    "2": lp_norm(&f, Norm::L2),
                    "inf": lp_norm(&f, Norm::LInf),
                });
            }
            ok(v)
        }
        Command::Project(a) => ok(project(a)?),
        Command::Sunits(a) => {
            let s = parse_place_set(&a.set)?;
            let basis = sunit_basis_bounded(s.base(), &s.finite_places(), config.disc_bound)?;
            let m = log_embedding(&basis)?;
            ok(json!({
                "basis": to_value(&basis),
                "generators": basis.labels().iter().zip(basis.elements()).map(|(l, x)| json!({"label": l, "value": x.to_string()})).collect::<Vec<_>>(),
                "log_matrix": to_value(&m),
                "singular_values": m.singular_values(),
                "rank": m.rank_check(),
                "ord_block": basis.ord_block()?,
            }))
        }
        Command::Approx(a) => {
            let s = parse_place_set(&a.set)?;
            let mut f = parse_target(s.base(), &a.target)?;
            if a.project {
                f = project_s(&f, &s)?;
            }
            let r = approximate_with(&f, &s, a.eps, a.p, config.n_max, config.disc_bound, config.tolerance)?;
            if let Some(path) = &a.trace_csv {
                let mut csv = String::from("N,error\n");
                for t in &r.trace {
                    csv.push_str(&format!("{},{}\n", t.n, t.error));
                }
                std::fs::write(path, csv).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            let code = if r.converged { EXIT_OK } else { EXIT_FAILURE };
            let mut v = to_value(&r);
            v["result_text"] = json!(r.result.to_string());
            Ok((v, code))
        }
        Command::Deps(a) => {
            let s = parse_place_set(&a.set)?;
            let fs = a.products.iter().map(|t| parse_formal_product(s.base(), t)).collect::<Result<Vec<_>>>()?;
            ok(to_value(&analyze_dependence_bounded(&fs, &s, config.disc_bound)?))
        }
        Command::Obstruct(a) => {
            let s = parse_place_set(&a.set)?;
            let report = obstruct(&s, a.bound, a.samples, cli.seed)?;
            let code = if report.all_hold() { EXIT_OK } else { EXIT_FAILURE };
            Ok((to_value(&report), code))
        }
        Command::Verify(a) => {
            let report = match a.check {
                Some(i) if (1..=verify::check_count() as u8).contains(&i) => {
                    let c = verify::run_check(i, cli.seed);
                    verify::VerifyReport { seed: cli.seed, passed: c.passed, checks: vec![c] }
                }
                Some(i) => return Err(Error::Parse(format!("no check {i}; checks are 1-{}", verify::check_count()))),
                None => verify::run(cli.seed),
            };
            let code = if report.passed { EXIT_OK } else { EXIT_FAILURE };
            Ok((to_value(&report), code))
        }
    }
}

fn field_info(a: &FieldArgs, config: &Config) -> Result<Value> {
    let k = parse_field(&a.field)?;
    let r1 = k.signature();
    let r2 = (k.degree() - r1 as i64) / 2;
    let mut v = json!({
        "field": k,
        "name": k.to_string(),
        "degree": k.degree(),
        "disc": k.disc(),
        "signature": [r1, r2],
        "unit_rank": k.unit_rank(),
        "class_number": class_number_bounded(k, config.disc_bound)?,
    });
    if k.is_real_quadratic() {
        let eps = fundamental_unit(k)?;
        v["fundamental_unit"] = to_value(&eps);
        v["fundamental_unit_text"] = json!(eps.to_string());
    }
    if let Some(text) = &a.elem {
        let x = crate::field::parse_element(k, text)?;
        let mut e = json!({
            "element": to_value(&x),
            "text": x.to_string(),
            "norm": crate::arith::fmt_rational(&x.norm()),
            "trace": crate::arith::fmt_rational(&x.trace()),
            "conj": x.conj().to_string(),
            "integral": x.is_integral(),
            "root_of_unity": !x.is_zero() && x.is_root_of_unity(),
        });
        if !x.is_zero() {
            e["inverse"] = json!(x.recip()?.to_string());
        }
        if let Some(n) = a.pow {
            e["pow"] = json!({ "exponent": n, "value": x.pow(n)?.to_string() });
        }
        v["element"] = e;
    }
    Ok(v)
}

fn rational_place(text: &str) -> Result<RationalPlace> {
    match text.trim() {
        "inf" | "∞" => Ok(RationalPlace::Infinite),
        t => t.parse().map(RationalPlace::Prime).map_err(|_| Error::Parse(format!("expected a prime or inf, got {t:?}"))),
    }
}

fn places_info(a: &PlacesArgs) -> Result<Value> {
    if let Some(set) = &a.set {
        let s = parse_place_set(set)?;
        return Ok(json!({
            "S": to_value(&s),
            "shorthand": s.shorthand(),
            "measure": crate::arith::fmt_rational(&s.measure()),
            "contains_all_archimedean": s.contains_all_archimedean(),
            "meets_archimedean": s.meets_archimedean(),
            "galois_stable": s.is_galois_stable(),
            "minimal_definition_field": s.minimal_definition_field(),
            "rational_shadow": s.rational_shadow().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        }));
    }
    let k = parse_field(a.field.as_deref().ok_or_else(|| Error::Parse("places needs --field or --S".into()))?)?;
    let x = a.elem.as_deref().map(|t| crate::field::parse_element(k, t)).transpose()?;
    match (&a.over, &x) {
        (Some(over), _) => {
            let fiber = places_above(k, rational_place(over)?)?;
            let mut rows = Vec::new();
            for v in &fiber {
                let mut row = json!({
                    "place": to_value(v),
                    "label": v.label(),
                    "measure": crate::arith::fmt_rational(&v.measure()),
                    "local_degree": v.local_degree(),
                });
                if let Some(p) = v.prime_ideal() {
                    row["splitting"] = to_value(&p.splitting());
                    row["ideal"] = json!(p.to_string());
                }
                if let Some(x) = &x {
                    let av = abs_value(x, v)?;
                    row["ord"] = json!(av.ord);
                    row["abs"] = json!(av.value);
                    row["log_abs"] = json!(av.ln_value);
                }
                rows.push(row);
            }
            Ok(json!({ "field": k, "over": over, "places": rows }))
        }
        (None, Some(x)) => {
            let f = crate::height::function_of(x)?;
            Ok(json!({
                "element": x.to_string(),
                "function": to_value(&f),
                "integral": integral(&f, None)?,
            }))
        }
        (None, None) => Err(Error::Parse("places needs --over, --elem or --S".into())),
    }
}

fn project(a: &ProjectArgs) -> Result<Value> {
    match a.op.as_str() {
        "s" | "S" => {
            let s = parse_place_set(a.set.as_deref().ok_or_else(|| Error::Parse("P_S needs --S".into()))?)?;
            let f = parse_target(s.base(), &a.target)?;
            Ok(to_value(&project_s(&f, &s)?))
        }
        "k" | "K" => {
            let field: QuadraticField = match (&a.field, &a.set) {
                (Some(t), _) => parse_field(t)?,
                (None, Some(s)) => parse_place_set(s)?.base(),
                (None, None) => return Err(Error::Parse("P_K needs --field".into())),
            };
            let f = parse_target(field, &a.target)?;
            Ok(to_value(&project_k(&f, parse_field(&a.to)?)?))
        }
        other => Err(Error::Parse(format!("--op must be s or k, got {other:?}"))),
    }
}

/// Flattens JSON into `path<TAB>value` lines.
pub fn table(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) if !m.is_empty() => {
                for (k, x) in m {
                    walk(&if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") }, x, out);
                }
            }
            Value::Array(a) if !a.is_empty() => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix}\t{s}\n")),
            other => out.push_str(&format!("{prefix}\t{other}\n")),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("algsunit").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn height_of_two() {
        let (code, out, _) = call(&["height", "--field", "Q", "--elem", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!((v["h"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["nope"]).0, 2);
        assert_eq!(call(&["height", "--field", "Q(sqrt(4))", "--elem", "2"]).0, 2);
        let (code, _, err) = call(&["approx", "--S", "Q:2,3", "--target", "{\"2\":1,\"3\":-1}"]);
        assert_eq!(code, 2);
        assert!(err.contains("archimedean"), "{err}");
        assert_eq!(call(&["--tolerance", "0", "field", "--field", "Q"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn table_output() {
        let (code, out, _) = call(&["--output", "table", "height", "--field", "Q", "--elem", "6", "--norms"]);
        assert_eq!(code, 0);
        assert!(out.lines().any(|l| l.starts_with("norms.inf\t")));
        assert!(out.starts_with("h\t"));
    }
}
