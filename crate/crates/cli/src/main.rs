//! `rrfold`: topology of arc diagrams and genus-zero RNA-RNA interaction folding.

mod error;
mod input;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use rrfold_core::atlas::{cut_derived_genus0, enumerate_irreducible_two_backbone, enumerate_shadows_one_backbone};
use rrfold_core::dotbracket::render_structure;
use rrfold_core::shadow::{gamma, irreducible_shadows, shadow};
use rrfold_core::topology::boundary_components;
use rrfold_core::{ApReport, Diagram, ZigZag};
use rrfold_fold::{
    count_structures, fill_tables, mfe, probabilities_from, sample_from, sequence_pair,
    EnergyModel, InteractionStructure, PairingProbabilities, SemiringChoice,
};

use error::{CliError, Result};
use input::{fasta_jobs, load_model, parse_diagram, read_text, Job};

#[derive(Parser)]
#[command(name = "rrfold", version, about = "Shadows, atlases and genus-zero interaction folding")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
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
    /// Boundary components and genus of a diagram.
    Genus(StructureArgs),
    /// Shadow projection of a diagram.
    Shadow(StructureArgs),
    /// Irreducible shadows, in removal order.
    Decompose(StructureArgs),
    /// Gamma, AP verdict and zig-zag witness.
    Classify(StructureArgs),
    /// Enumerate a shadow atlas.
    Atlas(AtlasArgs),
    /// Minimum free energy structure.
    Fold(SeqArgs),
    /// Partition function and structure count.
    Partition(SeqArgs),
    /// Pairing, hybrid and gap probabilities.
    Probs(ProbsArgs),
    /// Boltzmann samples as JSON lines.
    Sample(SampleArgs),
    /// Compare the folding engine against exhaustive enumeration.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct StructureArgs {
    /// Extended dot-bracket (`R&S`) or a JSON diagram.
    #[arg(long, required_unless_present = "structure_file", conflicts_with = "structure_file")]
    structure: Option<String>,
    /// File holding the structure; `-` reads stdin.
    #[arg(long)]
    structure_file: Option<PathBuf>,
}

#[derive(Args)]
struct AtlasArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    backbones: u8,
    #[arg(long)]
    genus: usize,
    /// Keep irreducible shadows only. Two-backbone atlases are always irreducible.
    #[arg(long)]
    irreducible: bool,
    /// Genus-zero two-backbone atlas obtained by cutting genus-one shadows.
    #[arg(long)]
    from_cuts: bool,
}

#[derive(Args)]
struct SeqArgs {
    #[arg(long, requires = "seq_s", conflicts_with = "fasta")]
    seq_r: Option<String>,
    #[arg(long, requires = "seq_r", conflicts_with = "fasta")]
    seq_s: Option<String>,
    /// FASTA file; consecutive records form (R, S) pairs. `-` reads stdin.
    #[arg(long, required_unless_present = "seq_r")]
    fasta: Option<PathBuf>,
    /// Energy model (TOML).
    #[arg(long, env = "RRFOLD_ENERGY")]
    energy: Option<PathBuf>,
    /// Override the cap on n_R + n_S.
    #[arg(long)]
    max_len: Option<usize>,
    /// Override the minimal hairpin size.
    #[arg(long)]
    theta: Option<usize>,
    /// Worker threads across sequence pairs.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
}

#[derive(Clone, Copy, ValueEnum)]
enum Matrix {
    Pairs,
    Hybrids,
    Gaps,
    Target,
    Paring,
}

#[derive(Args)]
struct ProbsArgs {
    #[command(flatten)]
    seq: SeqArgs,
    /// Matrix written as TSV in text mode.
    #[arg(long, value_enum, default_value_t = Matrix::Hybrids)]
    matrix: Matrix,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    seq: SeqArgs,
    #[arg(long, short = 'k', default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    seq: SeqArgs,
    /// Relative tolerance on floating-point comparisons.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("rrfold: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli, out: &mut impl std::io::Write) -> Result<()> {
    let fmt = cli.format;
    let mut emit = |s: String| {
        out.write_all(s.as_bytes()).map_err(|e| CliError::Input(format!("stdout: {e}")))
    };
    match &cli.command {
        Command::Genus(a) => emit(genus_cmd(&a.diagram()?, fmt)),
        Command::Shadow(a) => emit(shadow_cmd(&a.diagram()?, fmt)),
        Command::Decompose(a) => emit(decompose_cmd(&a.diagram()?, fmt)),
        Command::Classify(a) => emit(classify_cmd(&a.diagram()?, fmt)),
        Command::Atlas(a) => emit(atlas_cmd(a, fmt)?),
        Command::Fold(a) => for_each_pair(a, fmt, &mut emit, |job, m| fold_cmd(job, m, fmt)),
        Command::Partition(a) => for_each_pair(a, fmt, &mut emit, |job, m| partition_cmd(job, m, fmt)),
        Command::Probs(a) => {
            for_each_pair(&a.seq, fmt, &mut emit, |job, m| probs_cmd(job, m, a.matrix, fmt))
        }
        Command::Sample(a) => {
            for_each_pair(&a.seq, fmt, &mut emit, |job, m| sample_cmd(job, m, a, fmt))
        }
        Command::OracleCheck(a) => {
            for_each_pair(&a.seq, fmt, &mut emit, |job, m| oracle_cmd(job, m, a.tol, fmt))
        }
    }
}

impl StructureArgs {
    fn diagram(&self) -> Result<Diagram> {
        match (&self.structure, &self.structure_file) {
            (Some(s), _) => parse_diagram(s),
            (None, Some(p)) => parse_diagram(&read_text(p)?),
            (None, None) => Err(CliError::Usage("--structure or --structure-file is required".into())),
        }
    }
}

impl SeqArgs {
    fn jobs(&self) -> Result<Vec<Job>> {
        match (&self.seq_r, &self.seq_s, &self.fasta) {
            (Some(r), Some(s), _) => Ok(vec![Job { name: None, pair: sequence_pair(r, s)? }]),
            (_, _, Some(p)) => fasta_jobs(&read_text(p)?),
            _ => Err(CliError::Usage("give --seq-r and --seq-s, or --fasta".into())),
        }
    }

    fn model(&self) -> Result<EnergyModel> {
        let mut m = load_model(self.energy.as_deref())?;
        if let Some(cap) = self.max_len {
            m.max_len = cap;
        }
        if let Some(theta) = self.theta {
            m.theta = theta;
        }
        Ok(m)
    }
}

/// Output of one pair. A null `json` means `text` is the output in every
/// format (JSON lines are never wrapped in an array).
struct Rendered {
    text: String,
    json: serde_json::Value,
    mismatch: Option<String>,
}

fn for_each_pair(
    args: &SeqArgs,
    fmt: Format,
    emit: &mut impl FnMut(String) -> Result<()>,
    work: impl Fn(&Job, &EnergyModel) -> Result<Rendered> + Sync,
) -> Result<()> {
    let jobs = args.jobs()?;
    let model = args.model()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs as usize)
        .build()
        .map_err(|e| CliError::ResourceLimit(e.to_string()))?;
    let results: Vec<Result<Rendered>> = pool.install(|| jobs.par_iter().map(|j| work(j, &model)).collect());
    let many = jobs.len() > 1;
    let mut mismatch = None;
    let mut values = Vec::new();
    for (job, r) in jobs.iter().zip(results) {
        let r = r?;
        if mismatch.is_none() {
            mismatch = r.mismatch;
        }
        match fmt {
            Format::Text => {
                if let Some(name) = job.name.as_ref().filter(|_| many) {
                    emit(format!("# {name}\n"))?;
                }
                emit(r.text)?;
            }
            Format::Json if r.json.is_null() => emit(r.text)?,
            Format::Json if !many => emit(format!("{}\n", r.json))?,
            Format::Json => values.push(r.json),
        }
    }
    if !values.is_empty() {
        emit(format!("{}\n", serde_json::Value::Array(values)))?;
    }
    mismatch.map_or(Ok(()), |m| Err(CliError::Mismatch(m)))
}

fn to_json<T: Serialize>(v: &T) -> String {
    format!("{}\n", serde_json::to_string(v).expect("serializable output"))
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn render(d: &Diagram) -> String {
    render_structure(d).unwrap_or_else(|_| format!("{:?}", d.arcs()))
}

fn genus_cmd(d: &Diagram, fmt: Format) -> String {
    let report = boundary_components(d);
    match fmt {
        Format::Json => to_json(&report),
        Format::Text => format!(
            "genus {}\nr {}\nboundary_lengths {}\nchi {}\ngenus_per_component {}\n",
            report.genus_total,
            report.r,
            join(&report.boundary_lengths),
            report.chi,
            join(&report.genus_per_component)
        ),
    }
}

fn shadow_cmd(d: &Diagram, fmt: Format) -> String {
    let s = shadow(d);
    match fmt {
        Format::Json => to_json(&s),
        Format::Text => format!(
            "shadow {}\ngenus {}\nnontrivial {}\nirreducible {}\n",
            render(&s.diagram),
            s.genus,
            s.is_nontrivial,
            s.is_irreducible
        ),
    }
}

fn decompose_cmd(d: &Diagram, fmt: Format) -> String {
    let dec = irreducible_shadows(d);
    match fmt {
        Format::Json => to_json(&dec),
        Format::Text => {
            let mut s = String::new();
            for step in dec.shadows() {
                let class = serde_json::to_value(step.class).unwrap();
                let _ = writeln!(
                    s,
                    "{}\tgenus {}\t{}\tarcs {:?}",
                    class.as_str().unwrap_or_default(),
                    step.genus,
                    render(&step.shadow),
                    step.arcs
                );
            }
            if dec.is_empty() {
                s.push_str("no irreducible shadows\n");
            }
            s
        }
    }
}

#[derive(Serialize)]
struct Classification {
    gamma: usize,
    ap: Option<ApReport>,
    zigzag: Option<ZigZag>,
}

fn classify_cmd(d: &Diagram, fmt: Format) -> String {
    let c = Classification {
        gamma: gamma(d),
        ap: d.is_ap_structure().ok(),
        zigzag: d.detect_zigzag().ok().flatten(),
    };
    match fmt {
        Format::Json => to_json(&c),
        Format::Text => {
            let mut s = format!("gamma {}\n", c.gamma);
            match &c.ap {
                None => s.push_str("ap n/a (one backbone)\n"),
                Some(r) if r.is_ap => s.push_str("ap yes\n"),
                Some(r) => {
                    let clause = r.violation.map(|v| v.number()).unwrap_or_default();
                    let _ = writeln!(s, "ap no (clause {clause}: {})", r.detail);
                }
            }
            match c.zigzag {
                Some(z) => {
                    let _ = writeln!(s, "zigzag R{:?} S{:?} exterior{:?}", z.r_arc, z.s_arc, z.exterior);
                }
                None => s.push_str("zigzag none\n"),
            }
            s
        }
    }
}

fn atlas_cmd(a: &AtlasArgs, fmt: Format) -> Result<String> {
    let mut entries = match (a.backbones, a.from_cuts) {
        (2, true) if a.genus == 0 => cut_derived_genus0(),
        (_, true) => {
            return Err(CliError::Usage("--from-cuts needs --backbones 2 --genus 0".into()));
        }
        (1, false) => enumerate_shadows_one_backbone(a.genus)?,
        _ => enumerate_irreducible_two_backbone(a.genus)?,
    };
    if a.irreducible {
        entries.retain(|e| e.irreducible);
    }
    Ok(match fmt {
        Format::Json => to_json(&entries),
        Format::Text => {
            let mut s = String::new();
            for e in &entries {
                let _ = writeln!(s, "{}\tarcs {}\tgenus {}\tirreducible {}", e.structure, e.arcs, e.genus, e.irreducible);
            }
            let _ = writeln!(s, "{} entries", entries.len());
            s
        }
    })
}

#[derive(Serialize)]
struct FoldOut<'a> {
    r: &'a str,
    s: &'a str,
    mfe: f64,
    dot_bracket: String,
    structure: &'a InteractionStructure,
}

fn fold_cmd(job: &Job, m: &EnergyModel, fmt: Format) -> Result<Rendered> {
    let (e, st) = mfe(&job.pair, m)?;
    let out = FoldOut { r: job.pair.r_str(), s: job.pair.s_str(), mfe: e, dot_bracket: st.dot_bracket(), structure: &st };
    let text = match fmt {
        Format::Text => format!("{}&{}\n{}\nenergy {}\n", out.r, out.s, out.dot_bracket, e),
        Format::Json => String::new(),
    };
    Ok(Rendered { text, json: serde_json::to_value(&out).unwrap(), mismatch: None })
}

fn partition_cmd(job: &Job, m: &EnergyModel, fmt: Format) -> Result<Rendered> {
    let count = count_structures(&job.pair, m)?;
    let q = rrfold_fold::partition_function(&job.pair, m)?;
    let ensemble = -m.rt * q.ln();
    let json = serde_json::json!({ "partition": q, "ensemble_energy": ensemble, "count": count.to_string() });
    let text = match fmt {
        Format::Text => format!("partition {q}\nensemble_energy {ensemble}\ncount {count}\n"),
        Format::Json => String::new(),
    };
    Ok(Rendered { text, json, mismatch: None })
}

#[derive(Serialize)]
struct Entry2 {
    i: usize,
    j: usize,
    p: f64,
}

#[derive(Serialize)]
struct Entry4 {
    i: usize,
    j: usize,
    h: usize,
    l: usize,
    p: f64,
}

fn entries2(m: &std::collections::BTreeMap<(usize, usize), f64>) -> Vec<Entry2> {
    m.iter().map(|(&(i, j), &p)| Entry2 { i, j, p }).collect()
}

fn entries4(m: &std::collections::BTreeMap<(usize, usize, usize, usize), f64>) -> Vec<Entry4> {
    m.iter().map(|(&(i, j, h, l), &p)| Entry4 { i, j, h, l, p }).collect()
}

fn probs_json(p: &PairingProbabilities) -> serde_json::Value {
    let n = p.n_r + p.n_s;
    let mut dense = vec![vec![0.0; n]; n];
    for (&(i, j), &x) in &p.pairs {
        dense[i - 1][j - 1] = x;
        dense[j - 1][i - 1] = x;
    }
    serde_json::json!({
        "n_r": p.n_r,
        "n_s": p.n_s,
        "partition": p.partition,
        "pairs": dense,
        "unpaired": (1..=n).map(|v| p.unpaired(v)).collect::<Vec<_>>(),
        "hybrids": entries4(&p.hybrids),
        "gaps": entries4(&p.gaps),
        "target": entries2(&p.target),
        "paring": entries2(&p.paring),
    })
}

fn probs_tsv(p: &PairingProbabilities, matrix: Matrix) -> String {
    let mut s = String::new();
    match matrix {
        Matrix::Hybrids | Matrix::Gaps => {
            let m = if matches!(matrix, Matrix::Hybrids) { &p.hybrids } else { &p.gaps };
            s.push_str("i\tj\th\tl\tp\n");
            for (&(i, j, h, l), x) in m {
                let _ = writeln!(s, "{i}\t{j}\t{h}\t{l}\t{x}");
            }
        }
        Matrix::Pairs | Matrix::Target | Matrix::Paring => {
            let m = match matrix {
                Matrix::Pairs => &p.pairs,
                Matrix::Target => &p.target,
                _ => &p.paring,
            };
            s.push_str("i\tj\tp\n");
            for (&(i, j), x) in m {
                let _ = writeln!(s, "{i}\t{j}\t{x}");
            }
        }
    }
    s
}

fn probs_cmd(job: &Job, m: &EnergyModel, matrix: Matrix, fmt: Format) -> Result<Rendered> {
    let state = fill_tables(&job.pair, m, SemiringChoice::Boltzmann)?;
    let p = probabilities_from(&state)?;
    Ok(match fmt {
        Format::Text => Rendered { text: probs_tsv(&p, matrix), json: serde_json::Value::Null, mismatch: None },
        Format::Json => Rendered { text: String::new(), json: probs_json(&p), mismatch: None },
    })
}

#[derive(Serialize)]
struct SampleOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pair: Option<&'a str>,
    dot_bracket: String,
    #[serde(flatten)]
    structure: &'a InteractionStructure,
}

fn sample_cmd(job: &Job, m: &EnergyModel, a: &SampleArgs, fmt: Format) -> Result<Rendered> {
    let state = fill_tables(&job.pair, m, SemiringChoice::Boltzmann)?;
    let samples = sample_from(&state, a.count, a.seed)?;
    let mut text = String::new();
    for st in &samples {
        match fmt {
            Format::Json => {
                let line = SampleOut { pair: job.name.as_deref(), dot_bracket: st.dot_bracket(), structure: st };
                text.push_str(&to_json(&line));
            }
            Format::Text => {
                let _ = writeln!(text, "{}\t{}\t{}", st.dot_bracket(), st.energy, st.probability.unwrap_or(0.0));
            }
        }
    }
    Ok(Rendered { text, json: serde_json::Value::Null, mismatch: None })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    dp: String,
    oracle: String,
    ok: bool,
}

fn max_diff<K: Ord>(a: &std::collections::BTreeMap<K, f64>, b: &std::collections::BTreeMap<K, f64>) -> f64 {
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn oracle_cmd(job: &Job, m: &EnergyModel, tol: f64, fmt: Format) -> Result<Rendered> {
    let oracle = rrfold_oracle::enumerate_structures(&job.pair, m)?;
    let count = count_structures(&job.pair, m)?;
    let (e, best) = mfe(&job.pair, m)?;
    let oracle_mfe = oracle.structures.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min);
    let close = |a: f64, b: f64| (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0);
    let mut checks = vec![
        Check { name: "count", dp: count.to_string(), oracle: oracle.count.to_string(), ok: count == oracle.count },
        Check {
            name: "mfe",
            dp: e.to_string(),
            oracle: oracle_mfe.to_string(),
            ok: close(e, oracle_mfe) && oracle.structures.iter().any(|s| s.arcs == best.arcs),
        },
    ];
    match rrfold_fold::pairing_probabilities(&job.pair, m) {
        Ok(p) => {
            checks.push(Check {
                name: "partition",
                dp: p.partition.to_string(),
                oracle: oracle.partition.to_string(),
                ok: close(p.partition, oracle.partition),
            });
            for (name, d) in [
                ("pairs", max_diff(&p.pairs, &oracle.pairs)),
                ("hybrids", max_diff(&p.hybrids, &oracle.hybrids)),
                ("gaps", max_diff(&p.gaps, &oracle.gaps)),
                ("target", max_diff(&p.target, &oracle.target)),
                ("paring", max_diff(&p.paring, &oracle.paring)),
            ] {
                checks.push(Check { name, dp: format!("max_diff={d:e}"), oracle: String::new(), ok: d <= tol });
            }
        }
        Err(rrfold_fold::Error::Overflow) => {}
        Err(e) => return Err(e.into()),
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.ok).map(|c| c.name).collect();
    let mismatch = (!failed.is_empty()).then(|| format!("engine and oracle disagree on {}", failed.join(", ")));
    let mut text = String::new();
    if fmt == Format::Text {
        for c in &checks {
            let verdict = if c.ok { "OK" } else { "MISMATCH" };
            if c.oracle.is_empty() {
                let _ = writeln!(text, "{} {} {verdict}", c.name, c.dp);
            } else {
                let _ = writeln!(text, "{} dp={} oracle={} {verdict}", c.name, c.dp, c.oracle);
            }
        }
    }
    let json = serde_json::json!({
        "checks": checks,
        "oracle": {
            "count": oracle.count.to_string(),
            "partition": oracle.partition,
            "structures": oracle.structures.iter().map(|s| serde_json::json!({
                "dot_bracket": s.dot_bracket(),
                "arcs": s.arc_list(),
                "energy": s.energy,
            })).collect::<Vec<_>>(),
            "pairs": entries2(&oracle.pairs),
            "hybrids": entries4(&oracle.hybrids),
            "gaps": entries4(&oracle.gaps),
            "target": entries2(&oracle.target),
            "paring": entries2(&oracle.paring),
        },
    });
    Ok(Rendered { text, json, mismatch })
}
