use std::fmt::{Display, Write as _};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use iwasawa_core::classify::classify;
use iwasawa_core::corpus::{verify, CorpusManifest, TheoremId};
use iwasawa_core::degrees::{family_csv, family_report, relative_sd, sd, DegreeError, FamilyParams};
use iwasawa_core::spec::ActionExponent;
use iwasawa_core::{Analysis, Caps, GroupSpec};

const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "iwasawa", version, about = "Classify finite groups by their subgroup lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the group in a group file.
    Classify {
        path: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write the Hasse diagram of the subgroup lattice in DOT format.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        /// Include the subgroup commutativity degree report.
        #[arg(long)]
        sd: bool,
    },
    /// Subgroup commutativity degree report as JSON.
    Sd {
        path: PathBuf,
        /// Report sd(H, G) for the subgroup with this lattice index instead.
        #[arg(long, value_name = "INDEX")]
        relative: Option<usize>,
    },
    /// Table of sd over the metacyclic family Z_p : Z_{q^n}, n = 1..n_max.
    Family {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n_max: u32,
        /// Action exponent, or "auto" for the least valid one.
        #[arg(long, default_value = "auto", value_parser = parse_action)]
        t: ActionExponent,
        /// Also write the table to this CSV file.
        #[arg(long, value_name = "OUT")]
        csv: Option<PathBuf>,
    },
    /// Check the structural theorems on every entry of a corpus.
    Verify {
        /// Corpus manifest; the bundled corpus is used when omitted.
        #[arg(long, value_name = "MANIFEST")]
        corpus: Option<PathBuf>,
        /// "all" or a comma-separated list of theorem ids.
        #[arg(long, default_value = "all")]
        theorems: String,
    },
    /// Print the Hasse diagram of the subgroup lattice in DOT format.
    LatticeDot {
        path: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        output: Option<PathBuf>,
    },
}

fn parse_action(s: &str) -> Result<ActionExponent, String> {
    if s == "auto" {
        return Ok(ActionExponent::AUTO);
    }
    s.parse::<u64>().map(ActionExponent::Value).map_err(|_| format!("expected an integer or \"auto\", got {s:?}"))
}

/// A failed run: the message for stderr and the exit status.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(e: impl Display) -> Failure {
    Failure { code: EXIT_INPUT, message: e.to_string() }
}

type Outcome = Result<u8, Failure>;

fn load(path: &Path, caps: &Caps) -> Result<Analysis, Failure> {
    let spec = GroupSpec::from_file(path).map_err(input_error)?;
    let mut group = spec.build(caps).map_err(input_error)?;
    if group.name().is_none() {
        if let Some(stem) = path.file_stem() {
            group = group.with_name(stem.to_string_lossy());
        }
    }
    Analysis::new(group, caps).map_err(input_error)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn cmd_classify(path: &Path, json: bool, dot: Option<&Path>, with_sd: bool, caps: &Caps) -> Outcome {
    let a = load(path, caps)?;
    let report = classify(&a).map_err(|e| Failure { code: EXIT_FAILED, message: e.to_string() })?;
    let degrees = if with_sd { Some(sd(&a).map_err(degree_failure)?) } else { None };
    if let Some(out) = dot {
        write_file(out, &a.lattice().to_dot())?;
    }
    if json {
        let mut v = serde_json::to_value(&report).expect("reports serialize");
        if let (Some(d), Value::Object(map)) = (&degrees, &mut v) {
            map.insert("sd".into(), serde_json::to_value(d).expect("reports serialize"));
        }
        emit(&format!("{}\n", to_json(&v)));
        return Ok(0);
    }

    let mut out = String::new();
    let yn = |b: bool| if b { "yes" } else { "no" };
    writeln!(out, "group: {}", report.name.as_deref().unwrap_or("(unnamed)")).unwrap();
    writeln!(out, "order: {}", report.order).unwrap();
    writeln!(out, "subgroups: {}", report.lattice_size).unwrap();
    for (label, flag) in [
        ("abelian", report.is_abelian),
        ("cyclic", report.is_cyclic),
        ("nilpotent", report.is_nilpotent),
        ("modular lattice", report.is_modular),
        ("iwasawa", report.is_iwasawa),
        ("schmidt", report.is_schmidt),
        ("minimal non-iwasawa", report.is_minimal_non_iwasawa),
        ("minimal non-modular p-group", report.is_minimal_non_modular_p_group),
        ("minimal non-cyclic", report.is_minimal_non_cyclic),
        ("class C", report.in_class_c),
    ] {
        writeln!(out, "{label}: {}", yn(flag)).unwrap();
    }
    writeln!(out, "non-iwasawa proper subgroups: {}", report.non_iwasawa_proper.count).unwrap();
    if let Some(s) = &report.schmidt {
        writeln!(
            out,
            "schmidt structure: p={} q={} |P|={} r={} P abelian: {}",
            s.p,
            s.q,
            s.p_order,
            s.r,
            yn(s.p_abelian)
        )
        .unwrap();
    }
    if let Some(w) = &report.witness {
        writeln!(out, "witness: {}", serde_json::to_string(w).expect("reports serialize")).unwrap();
    }
    if let Some(d) = &degrees {
        writeln!(out, "sd: {} ({})", d.sd, d.sd_decimal).unwrap();
    }
    emit(&out);
    Ok(0)
}

fn degree_failure(e: DegreeError) -> Failure {
    let code = match e {
        DegreeError::HypothesisViolated(_) | DegreeError::Group(_) | DegreeError::BadIndex { .. } => EXIT_INPUT,
        DegreeError::Lattice(_) => EXIT_INPUT,
        _ => EXIT_FAILED,
    };
    Failure { code, message: e.to_string() }
}

fn cmd_sd(path: &Path, relative: Option<usize>, caps: &Caps) -> Outcome {
    let a = load(path, caps)?;
    match relative {
        None => emit(&format!("{}\n", to_json(&sd(&a).map_err(degree_failure)?))),
        Some(h) => {
            let value = relative_sd(&a, h).map_err(degree_failure)?;
            let out = serde_json::json!({
                "subgroup": h,
                "subgroup_order": a.lattice().subgroup(h).order(),
                "relative_sd": value,
                "relative_sd_decimal": value.to_decimal(10),
            });
            emit(&format!("{}\n", to_json(&out)));
        }
    }
    Ok(0)
}

fn cmd_family(p: u64, q: u64, n_max: u32, t: ActionExponent, csv: Option<&Path>, caps: &Caps) -> Outcome {
    let rows = family_report(&FamilyParams { p, q, t }, n_max, caps).map_err(degree_failure)?;
    let table = family_csv(&rows);
    if let Some(out) = csv {
        write_file(out, &table)?;
    }
    emit(&table);
    Ok(0)
}

fn cmd_verify(corpus: Option<&Path>, theorems: &str, caps: &Caps) -> Outcome {
    let manifest = match corpus {
        Some(path) => CorpusManifest::from_file(path).map_err(input_error)?,
        None => CorpusManifest::bundled(),
    };
    let ids = TheoremId::parse_list(theorems).map_err(input_error)?;
    let summary = verify(&manifest, &ids, caps);
    emit(&format!("{}\n", to_json(&summary)));
    Ok(summary.exit_code() as u8)
}

fn cmd_lattice_dot(path: &Path, output: Option<&Path>, caps: &Caps) -> Outcome {
    let dot = load(path, caps)?.lattice().to_dot();
    match output {
        Some(out) => write_file(out, &dot)?,
        None => emit(&dot),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = Caps::from_env();
    let outcome = match &cli.command {
        Command::Classify { path, json, dot, sd } => cmd_classify(path, *json, dot.as_deref(), *sd, &caps),
        Command::Sd { path, relative } => cmd_sd(path, *relative, &caps),
        Command::Family { p, q, n_max, t, csv } => cmd_family(*p, *q, *n_max, *t, csv.as_deref(), &caps),
        Command::Verify { corpus, theorems } => cmd_verify(corpus.as_deref(), theorems, &caps),
        Command::LatticeDot { path, output } => cmd_lattice_dot(path, output.as_deref(), &caps),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
