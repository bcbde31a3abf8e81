//! The `clasp` command line: validate, reduce, verify, rank and enumerate.
//!
//! Exit status 0 on success, 1 on domain errors, 2 on usage or parse errors.
//! Primary results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::canon::{canonicalize, digest_degree, skeleton_for_digest, Sign};
use crate::certificate::{verify_certificate, Certificate};
use crate::clasper::{reduce_clasper, shadow, validate_clasper, Clasper};
use crate::diagram::Diagram;
use crate::enumerate::{enumerate_diagrams, EnumerationSpec, Filter};
use crate::error::ParseError;
use crate::lincomb::LinearCombination;
use crate::reduce::{reduce_to_trees, Fallback, ReductionOptions, Strategy, DEFAULT_MAX_STEPS};
use crate::skeleton::{ComponentKind, Skeleton};
use crate::stu::{generate_relations, DimensionReport};
use crate::text::{parse_document, serialize_diagram, Document};

const SELF_TEST_ROUNDS: usize = 100;

#[derive(Debug, Parser)]
#[command(
    name = "clasp",
    version,
    about = "Reduce unitrivalent diagrams to tree diagrams modulo STU"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every skeleton, diagram and clasper in a file.
    Validate {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Also run a randomized relabeling self-test with this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reduce every diagram and clasper in a file to tree diagrams.
    Reduce {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value_t = Strategy::CycleFirst)]
        strategy: Strategy,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long, default_value = "linear-solve")]
        fallback: Fallback,
        /// Write the certificate here (requires exactly one item in the file).
        #[arg(long, value_name = "PATH")]
        cert: Option<PathBuf>,
    },
    /// Check a certificate against the relation span.
    Verify {
        #[arg(long, value_name = "PATH")]
        cert: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
        /// Skeleton file, inline declaration, kind list, or a name for the
        /// skeleton derived from the certificate.
        #[arg(long)]
        skeleton: Option<String>,
    },
    /// Report relation and quotient dimensions.
    Rank {
        #[arg(long)]
        skeleton: String,
        #[arg(long)]
        degree: usize,
    },
    /// List diagram classes, one digest and serialized diagram per line.
    Enumerate {
        #[arg(long)]
        skeleton: String,
        #[arg(long)]
        degree: usize,
        #[arg(long = "filter", default_value = "all")]
        filters: Vec<Filter>,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) => m,
        }
    }
}

/// Structural errors in otherwise well-formed text are domain errors.
fn parse_failure(e: ParseError) -> Failure {
    match e {
        ParseError::Invalid { .. } => Failure::Domain(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<Document, Failure> {
    parse_document(&read(path)?).map_err(parse_failure)
}

fn parse_kinds(s: &str) -> Option<Vec<ComponentKind>> {
    s.split(',')
        .map(|k| match k.trim() {
            "interval" => Some(ComponentKind::Interval),
            "circle" => Some(ComponentKind::Circle),
            _ => None,
        })
        .collect()
}

fn first_skeleton(src: &str) -> Result<Arc<Skeleton>, Failure> {
    let doc = parse_document(src).map_err(parse_failure)?;
    doc.skeletons
        .into_iter()
        .next()
        .ok_or_else(|| Failure::Usage("no skeleton declaration found".into()))
}

/// A skeleton from a file, an inline declaration or a comma-separated kind
/// list such as `interval,circle`.
fn resolve_skeleton(arg: &str) -> Result<Option<Arc<Skeleton>>, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return first_skeleton(&read(path)?).map(Some);
    }
    if arg.trim_start().starts_with("skeleton") {
        return first_skeleton(arg).map(Some);
    }
    Ok(parse_kinds(arg).map(|kinds| Arc::new(Skeleton::from_kinds("S", &kinds))))
}

fn required_skeleton(arg: &str) -> Result<Arc<Skeleton>, Failure> {
    resolve_skeleton(arg)?.ok_or_else(|| Failure::Usage(format!("cannot resolve skeleton `{arg}`")))
}

fn sign_token(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "-",
        Sign::Zero => "0",
    }
}

fn combination_text(lc: &LinearCombination) -> String {
    if lc.is_empty() {
        "0".into()
    } else {
        lc.to_string()
    }
}

fn self_test(name: &str, d: &Diagram, seed: u64) -> Result<(), String> {
    let want = canonicalize(d).form;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..SELF_TEST_ROUNDS {
        let got = canonicalize(&d.shuffled(&mut rng)).form;
        if got != want {
            return Err(format!("{name}: relabeling {round} changed the canonical form"));
        }
    }
    Ok(())
}

fn validate(input: &Path, seed: Option<u64>, out: &mut String, err: &mut String) -> Result<(), Failure> {
    let doc = load_document(input)?;
    if doc.diagrams.is_empty() && doc.claspers.is_empty() {
        return Err(Failure::Usage("no diagram or clasper found".into()));
    }
    let mut failed = false;
    for (name, d) in &doc.diagrams {
        let form = canonicalize(d).form;
        let _ = writeln!(
            out,
            "diagram {name} ok degree={} edges={} betti={} digest={} sign={}",
            d.degree(),
            d.edge_count(),
            d.betti(),
            form.digest,
            sign_token(form.sign)
        );
        if let Some(seed) = seed {
            if let Err(m) = self_test(name, d, seed) {
                let _ = writeln!(err, "{m}");
                failed = true;
            }
        }
    }
    for (name, c) in &doc.claspers {
        match validate_clasper(c) {
            Ok(()) => {
                let shadow_digest = match shadow(c) {
                    Ok(d) => canonicalize(&d).form.digest.to_string(),
                    Err(_) => "-".into(),
                };
                let _ = writeln!(out, "clasper {name} ok degree={} shadow={shadow_digest}", c.degree());
            }
            Err(e) => {
                let _ = writeln!(err, "clasper {name}: {e}");
                failed = true;
            }
        }
    }
    if let Some(seed) = seed {
        if !failed {
            let _ = writeln!(out, "self-test seed={seed} relabelings={SELF_TEST_ROUNDS} ok");
        }
    }
    if failed {
        return Err(Failure::Domain("validation failed".into()));
    }
    Ok(())
}

enum Item<'a> {
    Diagram(&'a str, &'a Diagram),
    Clasper(&'a str, &'a Clasper),
}

fn reduce(input: &Path, opts: &ReductionOptions, cert: Option<&Path>, out: &mut String) -> Result<(), Failure> {
    let doc = load_document(input)?;
    let items: Vec<Item> = doc
        .diagrams
        .iter()
        .map(|(n, d)| Item::Diagram(n, d))
        .chain(doc.claspers.iter().map(|(n, c)| Item::Clasper(n, c)))
        .collect();
    if items.is_empty() {
        return Err(Failure::Usage("no diagram or clasper found".into()));
    }
    if cert.is_some() && items.len() != 1 {
        return Err(Failure::Usage(format!(
            "--cert needs exactly one item, found {}",
            items.len()
        )));
    }
    let mut certificate = None;
    for item in &items {
        match item {
            Item::Diagram(name, d) => {
                let r = reduce_to_trees(d, opts).map_err(|e| Failure::Domain(format!("{name}: {e}")))?;
                let _ = writeln!(out, "{name}: {}", combination_text(&r.result));
                certificate = Some(r.certificate);
            }
            Item::Clasper(name, c) => {
                validate_clasper(c).map_err(|e| Failure::Domain(format!("{name}: {e}")))?;
                let r = reduce_clasper(c, opts).map_err(|e| Failure::Domain(format!("{name}: {e}")))?;
                let _ = writeln!(out, "{name}: {}", combination_text(&r.result));
                for e in &r.ledger.entries {
                    let _ = writeln!(
                        out,
                        "ledger step={} kind={} n1={} n2={} bound={}",
                        e.step,
                        e.kind.token(),
                        e.n1,
                        e.n2,
                        e.bound()
                    );
                }
                certificate = Some(r.certificate);
            }
        }
    }
    if let (Some(path), Some(c)) = (cert, certificate) {
        std::fs::write(path, c.to_string())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify(
    cert_path: &Path,
    degree: Option<usize>,
    skeleton: Option<&str>,
    out: &mut String,
    err: &mut String,
) -> Result<(), Failure> {
    let cert: Certificate = read(cert_path)?
        .parse()
        .map_err(|e: ParseError| Failure::Usage(e.to_string()))?;
    let derived = || skeleton_for_digest(&cert.input).map_err(|e| Failure::Domain(e.to_string()));
    let sk = match skeleton {
        None => Arc::new(derived()?),
        Some(arg) => match resolve_skeleton(arg)? {
            Some(sk) => sk,
            None => Arc::new(Skeleton::from_kinds(arg, &derived()?.kinds())),
        },
    };
    let n = match degree {
        Some(n) => n,
        None => digest_degree(&cert.input).map_err(|e| Failure::Domain(e.to_string()))?,
    };
    let sys = generate_relations(sk, n).map_err(|e| Failure::Domain(e.to_string()))?;
    let v = verify_certificate(&cert, &sys).map_err(|e| Failure::Domain(e.to_string()))?;
    if v.ok {
        out.push_str("OK\n");
        Ok(())
    } else {
        out.push_str("FAILED\n");
        for d in &v.diagnostics {
            let _ = writeln!(err, "{d}");
        }
        Err(Failure::Domain(match v.failing_step {
            Some(k) => format!("certificate rejected at step {k}"),
            None => "certificate rejected".into(),
        }))
    }
}

fn kinds_text(sk: &Skeleton) -> String {
    sk.kinds().iter().map(|k| k.keyword()).collect::<Vec<_>>().join(",")
}

fn rank(skeleton: &str, degree: usize, out: &mut String) -> Result<(), Failure> {
    let sk = required_skeleton(skeleton)?;
    let kinds = kinds_text(&sk);
    let sys = generate_relations(sk, degree).map_err(|e| Failure::Domain(e.to_string()))?;
    let _ = writeln!(out, "skeleton={kinds}\ndegree={degree}");
    out.push_str(&DimensionReport::new(&sys).to_text());
    Ok(())
}

fn enumerate(skeleton: &str, degree: usize, filters: &[Filter], out: &mut String) -> Result<(), Failure> {
    let sk = required_skeleton(skeleton)?;
    let classes =
        enumerate_diagrams(&EnumerationSpec::new(sk, degree, filters)).map_err(|e| Failure::Domain(e.to_string()))?;
    for (i, c) in classes.iter().enumerate() {
        let _ = writeln!(
            out,
            "{} {}",
            c.form.digest,
            serialize_diagram(&c.rep, &format!("D{}", i + 1))
        );
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut String, err: &mut String) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { input, seed } => validate(&input, seed, out, err),
        Command::Reduce {
            input,
            strategy,
            max_steps,
            fallback,
            cert,
        } => {
            let opts = ReductionOptions {
                strategy,
                max_steps,
                fallback,
            };
            reduce(&input, &opts, cert.as_deref(), out)
        }
        Command::Verify { cert, degree, skeleton } => verify(&cert, degree, skeleton.as_deref(), out, err),
        Command::Rank { skeleton, degree } => rank(&skeleton, degree, out),
        Command::Enumerate {
            skeleton,
            degree,
            filters,
        } => enumerate(&skeleton, degree, &filters, out),
    }
}

/// Runs one invocation, writing to the given streams; returns the exit status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut out = String::new();
    let mut err = String::new();
    let result = dispatch(cli, &mut out, &mut err);
    let _ = stdout.write_all(out.as_bytes());
    let _ = stderr.write_all(err.as_bytes());
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
