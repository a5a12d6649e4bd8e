//! `dicke`: construct states, evaluate invariants, classify, sample SLOCC
//! orbits and tabulate monogamy quantities. Reports are JSON (or CSV for
//! tabular commands) with the resolved configuration and tolerances echoed.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dicke_core::invariants::{d_l, d_l_exact, d_range, invariant_report, invariant_report_exact};
use dicke_core::monogamy::{monogamy_report, monogamy_sweep, MonogamyReport};
use dicke_core::slocc::{classify, classify_reference, covariance_campaign, CampaignConfig};
use dicke_core::statekit::{
    binomial, load_state_capped, store_state, DickeSpec, ExactState, ReferenceState, StateFile,
    StateVector,
};
use dicke_core::tolerances;
use serde::Serialize;

const TOOL: &str = "dicke";

#[derive(Parser, Debug)]
#[command(name = TOOL, version, about = "Dicke-state SLOCC invariants and monogamy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a state and write it as a state file.
    State(StateArgs),
    /// Evaluate τ and every D^(l).
    Tau(InvariantArgs),
    /// Evaluate every D^(l) (needs at least four qubits).
    Dcrit(InvariantArgs),
    /// List the reference classes a state is provably not equivalent to.
    Classify(InvariantArgs),
    /// Sample random local invertible maps and check the τ covariance law.
    Orbit(OrbitArgs),
    /// Concurrences and monogamy gap of one Dicke state.
    Monogamy(MonogamyArgs),
    /// Monogamy table over a range of qubit counts.
    Sweep(SweepArgs),
    /// Table of D^(k) over the Dicke states |l,n>.
    Conjecture(ConjectureArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct Selection {
    /// Qubit count of a Dicke state (with --l).
    #[arg(long)]
    n: Option<usize>,
    /// Excitation count of a Dicke state (with --n).
    #[arg(long)]
    l: Option<usize>,
    /// Dicke state |L,N>.
    #[arg(long, num_args = 2, value_names = ["N", "L"])]
    dicke: Option<Vec<usize>>,
    /// GHZ state on N qubits.
    #[arg(long, value_name = "N")]
    ghz: Option<usize>,
    /// W state on N qubits.
    #[arg(long, value_name = "N")]
    w: Option<usize>,
    /// State file (dense or sparse JSON).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Largest accepted qubit count.
    #[arg(long, default_value_t = tolerances::DEFAULT_MAX_QUBITS)]
    max_n: usize,
}

#[derive(Args, Debug, Serialize)]
struct Output {
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug, Serialize)]
struct StateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    select: Selection,
    /// Write the state file here; otherwise it is embedded in the report.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct InvariantArgs {
    #[command(flatten)]
    #[serde(flatten)]
    select: Selection,
    /// Integer arithmetic with exact rational results (reference states only).
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct OrbitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    select: Selection,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct MonogamyArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["N", "L"])]
    dicke: Option<Vec<usize>>,
    /// Largest qubit count; the numeric pipeline runs up to this size.
    #[arg(long, default_value_t = tolerances::DEFAULT_MAX_QUBITS)]
    max_n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    /// Largest qubit count in the table.
    #[arg(long = "n", default_value_t = 12)]
    n_max: usize,
    /// Cap on the table size.
    #[arg(long, default_value_t = 64)]
    max_n: usize,
    /// Rows with at most this many qubits also run the numeric pipeline.
    #[arg(long, default_value_t = 12)]
    numeric_max_n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Args, Debug, Serialize)]
struct ConjectureArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = tolerances::DEFAULT_MAX_QUBITS)]
    max_n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    output: Output,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind: "validation",
            message: message.into(),
        }
    }

    fn consistency(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "numerical_consistency",
            message: message.into(),
        }
    }
}

impl From<dicke_core::Error> for Failure {
    fn from(e: dicke_core::Error) -> Self {
        match e {
            dicke_core::Error::Consistency(m) => Self::consistency(m),
            dicke_core::Error::Io(_) => Self {
                code: 1,
                kind: "io",
                message: e.to_string(),
            },
            other => Self::validation(other.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a C,
    tolerances: tolerances::Tolerances,
    #[serde(flatten)]
    report: R,
}

fn envelope<'a, C: Serialize, R: Serialize>(
    command: &'static str,
    config: &'a C,
    report: R,
) -> Envelope<'a, C, R> {
    Envelope {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        tolerances: tolerances::ALL,
        report,
    }
}

fn to_json<T: Serialize>(value: &T) -> Outcome<String> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::validation(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure {
            code: 1,
            kind: "io",
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure {
                    code: 1,
                    kind: "io",
                    message: e.to_string(),
                })
        }
    }
}

fn json_only(output: &Output, command: &str) -> Outcome<()> {
    if output.format == Format::Csv {
        return Err(Failure::validation(format!(
            "`{command}` has no tabular output; use --format json"
        )));
    }
    Ok(())
}

enum Source {
    Reference(ReferenceState),
    File(PathBuf),
}

impl Source {
    fn label(&self) -> String {
        match self {
            Source::Reference(r) => r.to_string(),
            Source::File(p) => p.display().to_string(),
        }
    }
}

fn dicke_pair(
    n: Option<usize>,
    l: Option<usize>,
    dicke: &Option<Vec<usize>>,
) -> Outcome<Option<(usize, usize)>> {
    match (n, l, dicke) {
        (None, None, None) => Ok(None),
        (Some(n), Some(l), None) => Ok(Some((n, l))),
        (None, None, Some(v)) => Ok(Some((v[0], v[1]))),
        (_, _, Some(_)) => Err(Failure::validation(
            "use either --dicke N L or --n/--l, not both",
        )),
        _ => Err(Failure::validation("--n and --l must be given together")),
    }
}

impl Selection {
    fn source(&self) -> Outcome<Source> {
        let mut found = Vec::new();
        if let Some((n, l)) = dicke_pair(self.n, self.l, &self.dicke)? {
            found.push(Source::Reference(ReferenceState::Dicke { n, l }));
        }
        if let Some(n) = self.ghz {
            found.push(Source::Reference(ReferenceState::Ghz { n }));
        }
        if let Some(n) = self.w {
            found.push(Source::Reference(ReferenceState::W { n }));
        }
        if let Some(p) = &self.input {
            found.push(Source::File(p.clone()));
        }
        if found.len() != 1 {
            return Err(Failure::validation(
                "select exactly one state: --dicke N L, --n N --l L, --ghz N, --w N or --in FILE",
            ));
        }
        let source = found.pop().unwrap();
        if let Source::Reference(r) = &source {
            r.validate(self.max_n)?;
        }
        Ok(source)
    }

    fn state(&self, source: &Source) -> Outcome<StateVector> {
        Ok(match source {
            Source::Reference(r) => r.state_capped(self.max_n)?,
            Source::File(p) => load_state_capped(p, self.max_n).map_err(|e| {
                let mut f = Failure::from(e);
                f.message = format!("{}: {}", p.display(), f.message);
                f
            })?,
        })
    }
}

fn exact_reference(source: &Source, exact: bool) -> Outcome<Option<&ReferenceState>> {
    match (source, exact) {
        (Source::Reference(r), true) => Ok(Some(r)),
        (Source::File(_), true) => Err(Failure::validation(
            "--exact needs a reference state, not --in",
        )),
        _ => Ok(None),
    }
}

#[derive(Serialize)]
struct StateSummary {
    state: String,
    n: usize,
    norm_sqr: f64,
    written: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    state_file: Option<StateFile>,
}

fn run_state(args: &StateArgs) -> Outcome<String> {
    let source = args.select.source()?;
    let s = args.select.state(&source)?;
    let state_file = match &args.out {
        Some(path) => {
            store_state(path, &s)?;
            None
        }
        None => Some(StateFile::dense(&s)),
    };
    to_json(&envelope(
        "state",
        args,
        StateSummary {
            state: source.label(),
            n: s.n(),
            norm_sqr: s.norm_sqr(),
            written: args.out.clone(),
            state_file,
        },
    ))
}

fn run_invariants(command: &'static str, args: &InvariantArgs) -> Outcome<String> {
    json_only(&args.output, command)?;
    let source = args.select.source()?;
    let report = match exact_reference(&source, args.exact)? {
        Some(r) => invariant_report_exact(&r.exact_capped(args.select.max_n)?),
        None => invariant_report(&args.select.state(&source)?),
    };
    if command == "dcrit" && d_range(report.n).is_empty() {
        return Err(Failure::validation(format!(
            "D^(l) needs at least 4 qubits, got {}",
            report.n
        )));
    }
    #[derive(Serialize)]
    struct Labelled<T: Serialize> {
        state: String,
        #[serde(flatten)]
        report: T,
    }
    to_json(&envelope(
        command,
        args,
        Labelled {
            state: source.label(),
            report,
        },
    ))
}

fn run_classify(args: &InvariantArgs) -> Outcome<String> {
    json_only(&args.output, "classify")?;
    let source = args.select.source()?;
    let verdict = match exact_reference(&source, args.exact)? {
        Some(r) => classify_reference(r)?,
        None => classify(&args.select.state(&source)?, &source.label()),
    };
    to_json(&envelope("classify", args, verdict))
}

fn run_orbit(args: &OrbitArgs) -> Outcome<String> {
    json_only(&args.output, "orbit")?;
    if args.trials == 0 {
        return Err(Failure::validation("--trials must be at least 1"));
    }
    let source = args.select.source()?;
    let s = args.select.state(&source)?;
    let reference = match &source {
        Source::Reference(r) => Some(*r),
        Source::File(_) => None,
    };
    let config = CampaignConfig {
        trials: args.trials,
        seed: args.seed,
        ..CampaignConfig::default()
    };
    let report = covariance_campaign(&s, &source.label(), reference, &config)?;
    let text = to_json(&envelope("orbit", args, &report))?;
    if !report.consistent() {
        emit(&args.output.out, &text)?;
        return Err(Failure::consistency(format!(
            "orbit campaign out of tolerance: relative residual {:e}, path deviation {:?}, max D {:?}, soundness violations {:?}",
            report.max_relative_residual,
            report.orbit_path_deviation,
            report.orbit_max_d,
            report.soundness_violations
        )));
    }
    Ok(text)
}

#[derive(Serialize)]
struct CsvRow {
    n: usize,
    l: usize,
    c12: f64,
    c12_numeric: Option<f64>,
    c1_rest_sq: f64,
    chi: f64,
    is_max: bool,
}

fn csv_table<C: Serialize>(command: &str, config: &C, rows: &[MonogamyReport]) -> Outcome<String> {
    let to_failure = |e: &dyn std::fmt::Display| Failure::validation(e.to_string());
    let mut text = format!(
        "# tool={TOOL} version={} command={command}\n",
        env!("CARGO_PKG_VERSION")
    );
    let config = serde_json::to_string(config).map_err(|e| to_failure(&e))?;
    let tols = serde_json::to_string(&tolerances::ALL).map_err(|e| to_failure(&e))?;
    text.push_str(&format!("# config={config}\n# tolerances={tols}\n"));
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in rows {
        writer
            .serialize(CsvRow {
                n: r.n,
                l: r.l,
                c12: r.c12,
                c12_numeric: r.c12_numeric,
                c1_rest_sq: r.c1_rest_sq,
                chi: r.chi,
                is_max: r.is_max,
            })
            .map_err(|e| to_failure(&e))?;
    }
    let body = writer.into_inner().map_err(|e| to_failure(&e))?;
    text.push_str(&String::from_utf8(body).map_err(|e| to_failure(&e))?);
    Ok(text)
}

fn check_numeric(rows: &[MonogamyReport]) -> Outcome<()> {
    for r in rows {
        let pairs = [
            ("c12", r.c12, r.c12_numeric),
            ("c1_rest_sq", r.c1_rest_sq, r.c1_rest_sq_numeric),
        ];
        for (what, closed, numeric) in pairs {
            if let Some(v) = numeric {
                if (closed - v).abs() > tolerances::CHI_ROUTES {
                    return Err(Failure::consistency(format!(
                        "{what}(|{},{}>): closed form {closed} vs numeric {v}",
                        r.l, r.n
                    )));
                }
            }
        }
    }
    Ok(())
}

fn run_monogamy(args: &MonogamyArgs) -> Outcome<String> {
    let (n, l) = dicke_pair(args.n, args.l, &args.dicke)?
        .ok_or_else(|| Failure::validation("give --n N --l L or --dicke N L"))?;
    DickeSpec::with_cap(n, l, args.max_n)?;
    let report = monogamy_report(n, l, args.max_n)?;
    check_numeric(std::slice::from_ref(&report))?;
    match args.output.format {
        Format::Json => to_json(&envelope("monogamy", args, report)),
        Format::Csv => csv_table("monogamy", args, &[report]),
    }
}

fn run_sweep(args: &SweepArgs) -> Outcome<String> {
    if args.n_max > args.max_n {
        return Err(Failure::validation(format!(
            "--n {} exceeds --max-n {}",
            args.n_max, args.max_n
        )));
    }
    if args.numeric_max_n > tolerances::DEFAULT_MAX_QUBITS {
        return Err(Failure::validation(format!(
            "--numeric-max-n {} exceeds {}",
            args.numeric_max_n,
            tolerances::DEFAULT_MAX_QUBITS
        )));
    }
    let sweep = monogamy_sweep(args.n_min, args.n_max, args.numeric_max_n)?;
    check_numeric(&sweep.rows)?;
    match args.output.format {
        Format::Json => to_json(&envelope("sweep", args, &sweep)),
        Format::Csv => csv_table("sweep", args, &sweep.rows),
    }
}

#[derive(Serialize)]
struct ConjectureEntry {
    l: usize,
    k: usize,
    value: String,
    approx: f64,
    zero: bool,
    conjectured_zero: bool,
    matches: bool,
}

#[derive(Serialize)]
struct ConjectureTable {
    n: usize,
    entries: Vec<ConjectureEntry>,
    /// `D^(l)(|l,n>)` against `-1/C(n,l)^2`.
    diagonal: BTreeMap<usize, DiagonalCheck>,
    deviations: usize,
}

#[derive(Serialize)]
struct DiagonalCheck {
    value: String,
    expected: String,
    matches: bool,
}

fn run_conjecture(args: &ConjectureArgs) -> Outcome<String> {
    json_only(&args.output, "conjecture")?;
    let n = args.n;
    if n < 4 || n > args.max_n {
        return Err(Failure::validation(format!(
            "--n must lie in 4..={}, got {n}",
            args.max_n
        )));
    }
    let mut entries = Vec::new();
    let mut diagonal = BTreeMap::new();
    for l in 1..n {
        let e = ExactState::dicke(DickeSpec::with_cap(n, l, args.max_n)?);
        let float_state = e.to_state();
        for k in d_range(n) {
            let value = d_l_exact(&e, k)?;
            let approx = d_l(&float_state, k)?.re;
            let zero = *value.numer() == 0;
            let conjectured_zero = k != l;
            entries.push(ConjectureEntry {
                l,
                k,
                value: value.to_string(),
                approx,
                zero,
                conjectured_zero,
                matches: zero == conjectured_zero,
            });
            if k == l {
                let c = binomial(n as u64, l as u64);
                let expected = format!("-1/{}", u128::from(c) * u128::from(c));
                diagonal.insert(
                    l,
                    DiagonalCheck {
                        matches: value.to_string() == expected,
                        value: value.to_string(),
                        expected,
                    },
                );
            }
        }
    }
    let deviations = entries.iter().filter(|e| !e.matches).count();
    to_json(&envelope(
        "conjecture",
        args,
        ConjectureTable {
            n,
            entries,
            diagonal,
            deviations,
        },
    ))
}

fn run(cli: &Cli) -> Outcome<()> {
    let (text, out) = match &cli.command {
        Command::State(a) => (run_state(a)?, &None),
        Command::Tau(a) => (run_invariants("tau", a)?, &a.output.out),
        Command::Dcrit(a) => (run_invariants("dcrit", a)?, &a.output.out),
        Command::Classify(a) => (run_classify(a)?, &a.output.out),
        Command::Orbit(a) => (run_orbit(a)?, &a.output.out),
        Command::Monogamy(a) => (run_monogamy(a)?, &a.output.out),
        Command::Sweep(a) => (run_sweep(a)?, &a.output.out),
        Command::Conjecture(a) => (run_conjecture(a)?, &a.output.out),
    };
    emit(out, &text)
}

fn report_failure(f: &Failure) -> ExitCode {
    let body = serde_json::json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "error": { "kind": f.kind, "message": f.message, "exit_code": f.code },
    });
    eprintln!("{body}");
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return report_failure(&Failure::validation(e.to_string().trim_end()));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report_failure(&f),
    }
}
