//! Command-line front end: normal forms, point counts, flag enumeration,
//! twisted fixed-point counts, and the verification suite.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use dlspringer::combinatorics::Partition;
use dlspringer::flag_geometry::{flag_to_json, flags, VarietyKind, VarietySpec, DEFAULT_FLAG_BUDGET};
use dlspringer::gf::make_field;
use dlspringer::harness::{
    field_tower, generic_relpos_histogram, partition_sum_check, reproduce_examples,
    verify_dimensions, verify_theorem_a, verify_theorem_b, Report, DEFAULT_SEED,
};
use dlspringer::linalg::{format_matrix, parse_matrix};
use dlspringer::normal_forms::{beta_of_unipotent, weyr_matrix, Unipotent};
use dlspringer::padic::{lefschetz_count, parse_series_mat};

#[derive(Parser)]
#[command(
    name = "dlspringer",
    about = "Exact point counting on flag varieties over small finite fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Full,
    Dl,
    Springer,
    Intersection,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the staircase form of a partition over a field tower
    Weyr {
        /// Partition, e.g. "2,2"
        #[arg(long)]
        partition: String,
        /// Field tower as p,m,k (the field GF(p^(m*k)) over GF(p^m))
        #[arg(long, default_value = "2,1,1")]
        field: String,
    },
    /// Print the block-size partition of a unipotent matrix file
    Jordan {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Print the block reversal word attached to a unipotent matrix file
    Beta {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Count rational points of a flag-variety subset
    Count {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
        /// Permutation for dl/intersection kinds, e.g. "2,1,4,3"
        #[arg(long)]
        w: Option<String>,
        /// Partition for springer/intersection kinds (staircase form)
        #[arg(long)]
        partition: Option<String>,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
    },
    /// Enumerate the points of a flag-variety subset as JSON lines
    Enumerate {
        #[arg(long, value_enum, default_value = "full")]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        partition: Option<String>,
        /// Output path; standard output when omitted
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
    },
    /// Count flags fixed by a series-matrix unit twisted by Frobenius
    Lefschetz {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        w: String,
        /// Series matrix file: r blocks of d lines, blank-line separated
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
    },
    /// Run verification checks and report pass/fail
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Reproduce the three worked examples
    Examples {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Histogram of relative positions between two open-set point samples
    RelposHist {
        #[arg(long)]
        partition: String,
        /// First tableau, e.g. "1,3;2,4"
        #[arg(long)]
        p_tab: String,
        /// Second tableau
        #[arg(long)]
        q_tab: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Intersection structure checks for one partition
    ThmA {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Class-by-class fibre inclusion for one block list
    ThmB {
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Centralizer dimension formula and the dimension identity
    Dimensions {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        json: bool,
    },
    /// The varieties partition the flag variety
    Partition {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Every check at every partition of n up to n-max
    All {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FLAG_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
}

fn parse_field_triple(text: &str) -> Result<dlspringer::gf::Field> {
    let parts: Vec<u64> = text
        .split(',')
        .map(|t| t.trim().parse::<u64>().context("field triple"))
        .collect::<Result<_>>()?;
    if parts.len() != 3 {
        bail!("--field wants p,m,k");
    }
    Ok(make_field(parts[0], parts[1] as u32, parts[2] as u32)?)
}

fn build_spec(
    kind: Kind,
    n: usize,
    q: u64,
    k: u32,
    w: &Option<String>,
    partition: &Option<String>,
) -> Result<VarietySpec> {
    let field = field_tower(q, k)?;
    let need_w = || -> Result<dlspringer::combinatorics::Perm> {
        let text = w.as_ref().context("this kind needs --w")?;
        let perm: dlspringer::combinatorics::Perm = text.parse()?;
        if perm.n() != n {
            bail!("--w has {} letters but --n is {n}", perm.n());
        }
        Ok(perm)
    };
    let need_u = |field: &dlspringer::gf::Field| -> Result<dlspringer::linalg::Mat> {
        let text = partition.as_ref().context("this kind needs --partition")?;
        let shape: Partition = text.parse()?;
        if shape.size() != n {
            bail!("--partition sums to {} but --n is {n}", shape.size());
        }
        Ok(weyr_matrix(&shape, field))
    };
    let kind = match kind {
        Kind::Full => VarietyKind::Full,
        Kind::Dl => VarietyKind::DeligneLusztig(need_w()?),
        Kind::Springer => VarietyKind::Springer(need_u(&field)?),
        Kind::Intersection => VarietyKind::Intersection(need_u(&field)?, need_w()?),
    };
    Ok(VarietySpec { n, field, kind })
}

/// Writes to stdout, exiting quietly when the reader has hung up
/// (output piped into head, for example).
fn emit_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let res = out.write_all(text.as_bytes()).and_then(|()| out.flush());
    if let Err(e) = res {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

/// Prints reports (JSON lines or human-readable) and says whether all passed.
fn emit_reports(reports: &[Report], json: bool) -> Result<bool> {
    let mut all_pass = true;
    for r in reports {
        all_pass &= r.pass;
        if json {
            emit_stdout(&format!("{}\n", serde_json::to_string(r)?));
        } else {
            let params: Vec<String> = r
                .params
                .iter()
                .map(|(k, v)| format!("{k}={}", v.to_string().trim_matches('"')))
                .collect();
            emit_stdout(&format!(
                "[{}] {} {} expected={} actual={} ({} ms)\n",
                if r.pass { "PASS" } else { "FAIL" },
                r.claim_id,
                params.join(" "),
                r.expected,
                r.actual,
                r.runtime_ms
            ));
        }
    }
    Ok(all_pass)
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Weyr { partition, field } => {
            let shape: Partition = partition.parse()?;
            let field = parse_field_triple(&field)?;
            emit_stdout(&format_matrix(&weyr_matrix(&shape, &field)));
            Ok(true)
        }
        Cmd::Jordan { matrix } => {
            let text = fs::read_to_string(&matrix)
                .with_context(|| format!("reading {}", matrix.display()))?;
            let u = Unipotent::new(parse_matrix(&text)?)?;
            emit_stdout(&format!("{}\n", u.jordan_type()));
            Ok(true)
        }
        Cmd::Beta { matrix } => {
            let text = fs::read_to_string(&matrix)
                .with_context(|| format!("reading {}", matrix.display()))?;
            let u = Unipotent::new(parse_matrix(&text)?)?;
            emit_stdout(&format!("{}\n", beta_of_unipotent(&u)));
            Ok(true)
        }
        Cmd::Count {
            kind,
            n,
            q,
            k,
            w,
            partition,
            budget,
        } => {
            let spec = build_spec(kind, n, q, k, &w, &partition)?;
            emit_stdout(&format!("{}\n", spec.count_points(budget)?));
            Ok(true)
        }
        Cmd::Enumerate {
            kind,
            n,
            q,
            k,
            w,
            partition,
            emit,
            budget,
        } => {
            let spec = build_spec(kind, n, q, k, &w, &partition)?;
            match &emit {
                Some(path) => {
                    let mut out = fs::File::create(path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    for f in flags(n, &spec.field, budget)? {
                        if spec.contains(&f)? {
                            writeln!(out, "{}", flag_to_json(&f))?;
                        }
                    }
                }
                None => {
                    for f in flags(n, &spec.field, budget)? {
                        if spec.contains(&f)? {
                            emit_stdout(&format!("{}\n", flag_to_json(&f)));
                        }
                    }
                }
            }
            Ok(true)
        }
        Cmd::Lefschetz {
            d,
            r,
            q,
            w,
            g,
            k,
            budget,
        } => {
            let word: dlspringer::combinatorics::Perm = w.parse()?;
            let base = field_tower(q, 1)?;
            let text =
                fs::read_to_string(&g).with_context(|| format!("reading {}", g.display()))?;
            let series = parse_series_mat(&text, d, r, &base)?;
            let shape = Partition::new(vec![r; d])?;
            emit_stdout(&format!("{}\n", lefschetz_count(&shape, &word, &series, k, budget)?));
            Ok(true)
        }
        Cmd::Verify { what } => run_verify(what),
        Cmd::Examples {
            q,
            kmax,
            budget,
            json,
        } => {
            let reports = reproduce_examples(q, kmax, budget)?;
            emit_reports(&reports, json)
        }
        Cmd::RelposHist {
            partition,
            p_tab,
            q_tab,
            q,
            k,
            budget,
            json,
        } => {
            let shape: Partition = partition.parse()?;
            let first = p_tab.parse()?;
            let second = q_tab.parse()?;
            let report = generic_relpos_histogram(&shape, &first, &second, q, k, budget)?;
            emit_reports(&[report], json)
        }
    }
}

fn run_verify(what: VerifyCmd) -> Result<bool> {
    match what {
        VerifyCmd::ThmA {
            partition,
            q,
            kmax,
            seed,
            budget,
            json,
        } => {
            let shape: Partition = partition.parse()?;
            let reports = verify_theorem_a(&shape, q, kmax, seed, budget)?;
            emit_reports(&reports, json)
        }
        VerifyCmd::ThmB {
            blocks,
            q,
            kmax,
            budget,
            json,
        } => {
            let parts: Vec<usize> = blocks
                .split(',')
                .map(|t| t.trim().parse::<usize>().context("block list"))
                .collect::<Result<_>>()?;
            let reports = verify_theorem_b(&parts, q, kmax, budget)?;
            emit_reports(&reports, json)
        }
        VerifyCmd::Dimensions { n_max, q, json } => {
            let reports = verify_dimensions(n_max, q)?;
            emit_reports(&reports, json)
        }
        VerifyCmd::Partition {
            n,
            q,
            kmax,
            budget,
            json,
        } => {
            let mut reports = Vec::new();
            for k in 1..=kmax {
                reports.push(partition_sum_check(n, q, k, budget)?);
            }
            emit_reports(&reports, json)
        }
        VerifyCmd::All {
            n_max,
            q,
            kmax,
            seed,
            budget,
            json,
        } => {
            let mut reports = verify_dimensions(n_max, q)?;
            for n in 1..=n_max {
                for shape in dlspringer::combinatorics::partitions_of(n) {
                    reports.extend(verify_theorem_a(&shape, q, kmax, seed, budget)?);
                    reports.extend(verify_theorem_b(shape.parts(), q, kmax, budget)?);
                }
                for k in 1..=kmax {
                    reports.push(partition_sum_check(n, q, k, budget)?);
                }
            }
            emit_reports(&reports, json)
        }
    }
}

fn main() -> ExitCode {
    // verification failures exit nonzero so scripts can gate on the suite
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
