use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use factorbound::automatic::{self, factors, parse_definition, Definition};
use factorbound::certifier::{self, BoundCertificate};
use factorbound::common;
use factorbound::exactnum::QuadraticIrrational;
use factorbound::sturmian::{self, SturmianSpec};
use factorbound::words;

/// Exit statuses.
const PARSE: u8 = 2;
const CAP: u8 = 3;
const UNCERTIFIED: u8 = 4;
const VERIFY_FAILED: u8 = 5;

#[derive(Parser)]
#[command(
    name = "factorbound",
    version,
    about = "Common factors of automatic and Sturmian sequences",
    after_help = "Exit status: 0 ok, 2 parse error, 3 cap exceeded, \
                  4 uncertified or non-exhaustive result, 5 verification failed."
)]
struct Cli {
    #[arg(long, global = true, value_enum, env = "FACTORBOUND_FORMAT", default_value = "text")]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of a sequence.
    Generate {
        #[command(flatten)]
        seq: AnySequence,
        #[arg(short)]
        n: usize,
        /// Longest prefix that will be generated.
        #[arg(long, default_value_t = 100_000_000)]
        max_length: usize,
    },
    /// Certified set of length-n factors.
    Factors {
        #[command(flatten)]
        seq: AnySequence,
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        caps: Caps,
    },
    /// k-kernel of an automatic sequence.
    Kernel {
        #[command(flatten)]
        seq: AutomaticSequence,
    },
    /// Common factors of an automatic sequence and a Sturmian word.
    Common {
        #[command(flatten)]
        seq: AutomaticSequence,
        /// Spec string `alpha=… beta=…` or a file containing one.
        #[arg(long)]
        sturmian: String,
        #[arg(long, default_value_t = 32)]
        max_len: usize,
        /// Compare finite prefixes of this length instead of certified factor sets.
        #[arg(long)]
        prefix: Option<usize>,
        #[command(flatten)]
        caps: Caps,
    },
    /// Derive and self-check a bound certificate.
    Certify {
        #[command(flatten)]
        seq: AutomaticSequence,
        #[command(flatten)]
        alpha: AlphaSource,
    },
    /// Re-check a certificate file.
    Verify {
        certificate: PathBuf,
        #[command(flatten)]
        seq: AutomaticSequence,
        /// Defaults to the alpha recorded in the certificate.
        #[command(flatten)]
        alpha: OptionalAlpha,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AnySequence {
    /// Uniform morphism definition file.
    #[arg(long)]
    morphism: Option<PathBuf>,
    /// DFAO definition file.
    #[arg(long)]
    dfao: Option<PathBuf>,
    /// Spec string `alpha=… beta=…` or a file containing one.
    #[arg(long)]
    sturmian: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AutomaticSequence {
    /// Uniform morphism definition file.
    #[arg(long)]
    morphism: Option<PathBuf>,
    /// DFAO definition file.
    #[arg(long)]
    dfao: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct AlphaSource {
    /// Slope in the form `(a+b*sqrt(d))/c`.
    #[arg(long)]
    alpha: Option<String>,
    /// Uses the slope of a Sturmian spec.
    #[arg(long)]
    sturmian: Option<String>,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct OptionalAlpha {
    /// Slope in the form `(a+b*sqrt(d))/c`.
    #[arg(long)]
    alpha: Option<String>,
    /// Uses the slope of a Sturmian spec.
    #[arg(long)]
    sturmian: Option<String>,
}

#[derive(Args)]
struct Caps {
    /// Closure rounds before a morphic factor set is reported uncertified.
    #[arg(long, default_value_t = factors::DEFAULT_MAX_ROUNDS)]
    max_rounds: usize,
    /// Sturmian prefix scanned before a factor set is reported uncertified.
    #[arg(long, default_value_t = sturmian::DEFAULT_PREFIX_CAP)]
    prefix_cap: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

/// Result of a command: what to print plus the exit status.
struct Outcome {
    body: String,
    code: u8,
    note: Option<String>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome { body, code: 0, note: None }
    }
}

enum Sequence {
    Automatic(Definition),
    Sturmian(SturmianSpec),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn load_definition(morphism: &Option<PathBuf>, dfao: &Option<PathBuf>) -> Result<Definition, Failure> {
    let path = morphism.as_ref().or(dfao.as_ref()).expect("clap enforces one source");
    let def = parse_definition(&read(path)?)
        .map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))?;
    let wanted_morphism = morphism.is_some();
    match (&def, wanted_morphism) {
        (Definition::Morphism(_), true) | (Definition::Dfao(_), false) => Ok(def),
        _ => Err(Failure::new(
            PARSE,
            format!("{}: definition kind does not match the flag", path.display()),
        )),
    }
}

/// Reads a spec string, or a file holding one when the argument names a file.
fn load_text_or_file(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    let text = if path.is_file() { read(path)? } else { arg.to_string() };
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join(" "))
}

fn load_sturmian(arg: &str) -> Result<SturmianSpec, Failure> {
    load_text_or_file(arg)?
        .parse()
        .map_err(|e| Failure::new(PARSE, format!("sturmian spec: {e}")))
}

fn load_alpha(alpha: &Option<String>, sturmian: &Option<String>) -> Result<Option<QuadraticIrrational>, Failure> {
    if let Some(a) = alpha {
        let a = load_text_or_file(a)?;
        return a
            .trim()
            .parse()
            .map(Some)
            .map_err(|e| Failure::new(PARSE, format!("alpha: {e}")));
    }
    match sturmian {
        Some(s) => Ok(Some(load_sturmian(s)?.alpha().clone())),
        None => Ok(None),
    }
}

fn load_any(seq: &AnySequence) -> Result<Sequence, Failure> {
    match &seq.sturmian {
        Some(s) => Ok(Sequence::Sturmian(load_sturmian(s)?)),
        None => Ok(Sequence::Automatic(load_definition(&seq.morphism, &seq.dfao)?)),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn generate(seq: &AnySequence, n: usize, max_length: usize, format: Format) -> Result<Outcome, Failure> {
    if n > max_length {
        return Err(Failure::new(CAP, format!("-n {n} exceeds --max-length {max_length}")));
    }
    let word = match load_any(seq)? {
        Sequence::Automatic(def) => def.prefix(n),
        Sequence::Sturmian(spec) => sturmian::prefix(&spec, n),
    };
    let word = words::to_string(&word);
    Ok(Outcome::ok(match format {
        Format::Json => to_json(&serde_json::json!({ "length": n, "word": word })) + "\n",
        Format::Text if word.is_empty() => String::new(),
        Format::Text => word + "\n",
    }))
}

fn factor_listing(set: &factors::FactorSet) -> String {
    let mut out = format!(
        "length {}  count {}  certified {}\n",
        set.length,
        set.len(),
        set.certified
    );
    for w in &set.factors {
        out.push_str(&words::to_string(w));
        out.push('\n');
    }
    out
}

fn factors_cmd(seq: &AnySequence, n: usize, caps: &Caps, format: Format) -> Result<Outcome, Failure> {
    let set = match load_any(seq)? {
        Sequence::Automatic(def) => factors::factor_set_with_cap(&def.to_morphism(), n, caps.max_rounds),
        Sequence::Sturmian(spec) => sturmian::factor_set_with_cap(&spec, n, caps.prefix_cap),
    };
    let body = match format {
        Format::Json => to_json(&set) + "\n",
        Format::Text => factor_listing(&set),
    };
    Ok(if set.certified {
        Outcome::ok(body)
    } else {
        Outcome {
            body,
            code: UNCERTIFIED,
            note: Some(format!("factor set of length {n} is not certified complete")),
        }
    })
}

fn kernel_cmd(seq: &AutomaticSequence, format: Format) -> Result<Outcome, Failure> {
    let dfao = load_definition(&seq.morphism, &seq.dfao)?.to_dfao();
    let report = automatic::kernel(&dfao);
    Ok(Outcome::ok(match format {
        Format::Json => to_json(&report) + "\n",
        Format::Text => {
            let mut out = format!("Q = {}\nclosure depth {}\n", report.q, report.closure_depth);
            for class in &report.classes {
                out.push_str(&format!(
                    "class {}  r = {}  s = {}  states {}\n",
                    class.id,
                    class.r,
                    class.s,
                    class.witness.num_states()
                ));
            }
            out
        }
    }))
}

fn common_cmd(
    seq: &AutomaticSequence,
    spec: &str,
    max_len: usize,
    prefix: Option<usize>,
    caps: &Caps,
    format: Format,
) -> Result<Outcome, Failure> {
    let def = load_definition(&seq.morphism, &seq.dfao)?;
    let spec = load_sturmian(spec)?;
    if let Some(len) = prefix {
        let x = def.prefix(len);
        let a = sturmian::prefix(&spec, len);
        let found = common::longest_common_factor_prefix(&x, &a);
        return Ok(Outcome::ok(match format {
            Format::Json => to_json(&found) + "\n",
            Format::Text => format!(
                "length {}  witness {}  i {}  j {}\n",
                found.length,
                words::to_string(&found.witness),
                found.i,
                found.j
            ),
        }));
    }
    if max_len == 0 {
        return Err(Failure::new(PARSE, "--max-len must be at least 1"));
    }
    let report = common::common_factors_with_caps(
        &def.to_morphism(),
        &spec,
        max_len,
        caps.max_rounds,
        caps.prefix_cap,
    );
    let body = match format {
        Format::Json => to_json(&report) + "\n",
        Format::Text => common::report_to_text(&report),
    };
    Ok(if report.exhausted {
        Outcome::ok(body)
    } else {
        Outcome {
            body,
            code: UNCERTIFIED,
            note: Some(match report.uncertified_at {
                Some(len) => format!("factor sets uncertified at length {len}"),
                None => format!("common factors remain at --max-len {max_len}"),
            }),
        }
    })
}

fn verdict_text(verdict: &certifier::Verdict) -> String {
    match verdict.failure() {
        None => "certificate valid".to_string(),
        Some(check) => format!("certificate invalid at step {}: {}", check.step, check.detail),
    }
}

fn certify_cmd(seq: &AutomaticSequence, alpha: &AlphaSource) -> Result<Outcome, Failure> {
    let dfao = load_definition(&seq.morphism, &seq.dfao)?.to_dfao();
    let alpha = load_alpha(&alpha.alpha, &alpha.sturmian)?.expect("clap enforces one source");
    let cert = certifier::certify(&dfao, &alpha).map_err(|e| Failure::new(PARSE, e.to_string()))?;
    let verdict = certifier::verify(&cert, &dfao, &alpha);
    Ok(Outcome {
        body: to_json(&cert) + "\n",
        code: if verdict.is_valid() { 0 } else { VERIFY_FAILED },
        note: Some(verdict_text(&verdict)),
    })
}

fn verify_cmd(path: &Path, seq: &AutomaticSequence, alpha: &OptionalAlpha, format: Format) -> Result<Outcome, Failure> {
    let cert: BoundCertificate = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))?;
    let dfao = load_definition(&seq.morphism, &seq.dfao)?.to_dfao();
    let alpha = load_alpha(&alpha.alpha, &alpha.sturmian)?.unwrap_or_else(|| cert.alpha.clone());
    let verdict = certifier::verify(&cert, &dfao, &alpha);
    Ok(Outcome {
        body: match format {
            Format::Json => to_json(&verdict) + "\n",
            Format::Text => verdict_text(&verdict) + "\n",
        },
        code: if verdict.is_valid() { 0 } else { VERIFY_FAILED },
        note: None,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Generate { seq, n, max_length } => generate(seq, *n, *max_length, cli.format),
        Command::Factors { seq, n, caps } => factors_cmd(seq, *n, caps, cli.format),
        Command::Kernel { seq } => kernel_cmd(seq, cli.format),
        Command::Common {
            seq,
            sturmian,
            max_len,
            prefix,
            caps,
        } => common_cmd(seq, sturmian, *max_len, *prefix, caps, cli.format),
        Command::Certify { seq, alpha } => certify_cmd(seq, alpha),
        Command::Verify { certificate, seq, alpha } => verify_cmd(certificate, seq, alpha, cli.format),
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), Failure> {
    let written = match &cli.output {
        Some(path) => fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    written.map_err(|e| Failure::new(1, format!("writing output: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|outcome| emit(&cli, &outcome.body).map(|()| outcome)) {
        Ok(outcome) => {
            if let Some(note) = outcome.note {
                eprintln!("{note}");
            }
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
