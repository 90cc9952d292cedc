//! Command-line front end. `run_command` takes an argv and returns the exit
//! code with the text destined for stdout and stderr, so the binary is a thin
//! wrapper and tests can drive commands in-process.
//!
//! Exit codes: 0 success, 3 valid input that is not certified or fails a
//! verification, 1 any error (a JSON error object is written to stderr).

pub mod report;
mod text;

use boundstab::catalog::{catalog, NAMES};
use boundstab::cert::is_separable;
use boundstab::dense::{product_state_excluded, separable_form_deviation, verify_sector_decomposition};
use boundstab::group::{close_with_cap, DEFAULT_CLOSURE_CAP};
use boundstab::unlock::{outcome_correlation_check, CorrelationRule, Protocol, Simulator, DEFAULT_OUTCOME_CAP};
use boundstab::{certify_ube, Error, GeneratorSpec, Partition, SearchOptions, ShotRecord, Tolerances, Verdict};
use clap::{Args, Parser, Subcommand};
use report::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::ffi::OsString;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "boundstab", version)]
#[command(about = "Certify and simulate unlockable bound entangled stabilizer states")]
struct Cli {
    /// Machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the sampling RNG; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Numerical tolerance for dense checks.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Closure-size cap (analyze, certify, decompose) or outcome cap for
    /// exhaustive enumeration (unlock).
    #[arg(long, global = true)]
    cap: Option<u128>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Generator file path, or a catalog entry such as `smolin4` or `gsmolin:3`.
    input: String,

    /// Partition syntax such as `1,2|3,4`, or the name of a partition in the input.
    #[arg(long = "partition", short = 'p')]
    partitions: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group order, stabilized-subspace dimension and generator spectra.
    Analyze(Input),

    /// Check both certification conditions; `--partition` restricts the
    /// condition-2 search to the given candidates.
    Certify(Input),

    /// Verify the sector decomposition and, for each partition, the explicit
    /// separable form or the absence of product states.
    Decompose(Input),

    /// Measure every block but one in its labeled basis and report the
    /// residual state on the remaining block.
    Unlock {
        #[command(flatten)]
        input: Input,

        /// Number of sampled shots.
        #[arg(long, default_value_t = 1000)]
        shots: usize,

        /// Enumerate every outcome with nonzero probability instead of sampling.
        #[arg(long)]
        exhaustive: bool,

        /// 1-based block left unmeasured; defaults to the first block that
        /// passes condition (2).
        #[arg(long)]
        block: Option<usize>,

        /// Include residual state vectors in the records.
        #[arg(long)]
        residuals: bool,
    },

    /// List catalog entries, or print one as a generator file.
    Catalog { name: Option<String> },
}

/// Exit code plus captured output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    kind: String,
    message: String,
    at: Option<(usize, usize)>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let at = match &e {
            Error::Parse { line, column, .. } => Some((*line, *column)),
            _ => None,
        };
        Failure {
            kind: e.kind().to_string(),
            message: e.to_string(),
            at,
        }
    }
}

fn failure(kind: &str, message: impl Into<String>) -> Failure {
    Failure {
        kind: kind.into(),
        message: message.into(),
        at: None,
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Successful command output before rendering.
struct Rendered {
    code: i32,
    value: serde_json::Value,
    /// Text used instead of the generic rendering in non-JSON mode.
    plain: Option<String>,
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn run_command<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => error_outcome(&failure("usage", text.trim_end())),
            };
        }
    };
    match dispatch(&cli) {
        Ok(r) => {
            let stdout = if cli.json {
                let mut s = serde_json::to_string_pretty(&r.value).expect("json");
                s.push('\n');
                s
            } else {
                r.plain.unwrap_or_else(|| text::render(&r.value))
            };
            Outcome {
                code: r.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(f) => error_outcome(&f),
    }
}

fn error_outcome(f: &Failure) -> Outcome {
    let body = ErrorReport {
        error: ErrorBody {
            kind: f.kind.clone(),
            message: f.message.clone(),
            line: f.at.map(|a| a.0),
            column: f.at.map(|a| a.1),
        },
    };
    let mut stderr = serde_json::to_string(&body).expect("json");
    stderr.push('\n');
    Outcome {
        code: EXIT_ERROR,
        stdout: String::new(),
        stderr,
    }
}

struct Loaded {
    spec: GeneratorSpec,
    source: &'static str,
    name: String,
}

fn load(input: &str) -> Run<Loaded> {
    let path = std::path::Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| failure("io", format!("{input}: {e}")))?;
        return Ok(Loaded {
            spec: GeneratorSpec::parse(&text)?,
            source: "file",
            name: input.to_string(),
        });
    }
    match catalog(input) {
        Ok(spec) => Ok(Loaded {
            spec,
            source: "catalog",
            name: input.to_string(),
        }),
        Err(Error::UnknownCatalog(_)) if input.contains(['/', '.']) => {
            Err(failure("io", format!("{input}: no such file")))
        }
        Err(e) => Err(e.into()),
    }
}

/// Resolves `--partition` values: a named partition first, then syntax.
fn partitions(spec: &GeneratorSpec, given: &[String]) -> Run<Vec<(String, Partition)>> {
    given
        .iter()
        .map(|g| match spec.partition(g) {
            Some(p) => Ok((g.clone(), p.clone())),
            None => Partition::parse(spec.gens.n_sites(), g)
                .map(|p| (g.clone(), p))
                .map_err(Failure::from),
        })
        .collect()
}

/// Named partitions of the input followed by any given on the command line.
fn all_partitions(spec: &GeneratorSpec, given: &[String]) -> Run<Vec<(String, Partition)>> {
    let mut out = spec.partitions.clone();
    for (name, p) in partitions(spec, given)? {
        if !out.iter().any(|(_, q)| *q == p) {
            out.push((name, p));
        }
    }
    Ok(out)
}

fn one_based(sites: &[usize]) -> Vec<usize> {
    sites.iter().map(|s| s + 1).collect()
}

fn echo(l: &Loaded) -> InputEcho {
    InputEcho {
        source: l.source,
        name: l.name.clone(),
        dims: l.spec.gens.dims().dims().to_vec(),
        generators: l.spec.gens.gens().iter().map(|g| g.to_string()).collect(),
        partitions: l
            .spec
            .partitions
            .iter()
            .map(|(name, p)| NamedPartition {
                name: name.clone(),
                partition: p.to_string(),
            })
            .collect(),
    }
}

fn report<R: Serialize>(cli: &Cli, command: &'static str, input: Option<InputEcho>, result: R) -> serde_json::Value {
    to_value(&Report {
        format: FORMAT,
        tool: Tool::default(),
        command,
        input,
        seed: cli.seed,
        result,
    })
}

fn separability(spec: &GeneratorSpec, parts: &[(String, Partition)]) -> Run<Vec<PartitionSeparability>> {
    parts
        .iter()
        .map(|(name, p)| {
            Ok(PartitionSeparability {
                name: name.clone(),
                partition: p.to_string(),
                separable: is_separable(&spec.gens, p)?,
            })
        })
        .collect()
}

fn dispatch(cli: &Cli) -> Run<Rendered> {
    match &cli.command {
        Command::Analyze(i) => analyze(cli, i),
        Command::Certify(i) => certify(cli, i),
        Command::Decompose(i) => decompose(cli, i),
        Command::Unlock {
            input,
            shots,
            exhaustive,
            block,
            residuals,
        } => unlock(cli, input, *shots, *exhaustive, *block, *residuals),
        Command::Catalog { name } => list_catalog(cli, name.as_deref()),
    }
}

fn analyze(cli: &Cli, i: &Input) -> Run<Rendered> {
    let l = load(&i.input)?;
    let gens = &l.spec.gens;
    let s = close_with_cap(gens, cli.cap.unwrap_or(DEFAULT_CLOSURE_CAP))?;
    let total = gens.dims().total();
    let generators = gens
        .gens()
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let order = g.order();
            let site_orders = (0..gens.n_sites())
                .map(|site| g.restrict(&[site]).map(|w| w.order()))
                .collect::<boundstab::Result<Vec<_>>>()?;
            Ok(GeneratorInfo {
                index: k + 1,
                word: g.to_string(),
                order,
                site_orders,
                eigenvalue_multiplicity: total / order,
            })
        })
        .collect::<Run<Vec<_>>>()?;
    let result = Analysis {
        sites: gens.n_sites(),
        total_dimension: total,
        phase_modulus: gens.dims().phase_modulus(),
        generators,
        group: GroupInfo {
            size: s.size(),
            tuple_count: s.tuple_count(),
            phase_collision: s.phase_collision(),
            subspace_dimension: s.subspace_dimension(),
            complete: s.is_complete(),
            sector_count: s.sector_count().ok(),
        },
        partitions: separability(&l.spec, &all_partitions(&l.spec, &i.partitions)?)?,
    };
    Ok(Rendered {
        code: EXIT_OK,
        value: report(cli, "analyze", Some(echo(&l)), result),
        plain: None,
    })
}

fn certify(cli: &Cli, i: &Input) -> Run<Rendered> {
    let l = load(&i.input)?;
    let given = partitions(&l.spec, &i.partitions)?;
    let mut opts = SearchOptions::default();
    if let Some(cap) = cli.cap {
        opts.closure_cap = cap;
    }
    if !given.is_empty() {
        opts.candidates = Some(given.iter().map(|(_, p)| p.clone()).collect());
    }
    let cert = certify_ube(&l.spec.gens, &opts)?;
    let revalidated = cert.revalidate(&l.spec.gens, opts.closure_cap)?;
    let failed = match &cert.verdict {
        Verdict::CertifiedUbe => Vec::new(),
        Verdict::NotCertified(f) => f
            .iter()
            .map(|c| match c {
                boundstab::cert::FailedCondition::Condition1 => "condition1",
                boundstab::cert::FailedCondition::Condition2 => "condition2",
                boundstab::cert::FailedCondition::EmptySubspace => "empty_subspace",
            })
            .collect(),
    };
    let certified = cert.is_certified() && revalidated;
    let result = Certification {
        verdict: if certified { "certified_ube" } else { "not_certified" },
        failed,
        condition1: cert
            .condition1
            .iter()
            .map(|w| PairEntry {
                pair: [w.pair.0 + 1, w.pair.1 + 1],
                witness: w.witness.as_ref().map(|p| p.to_string()),
            })
            .collect(),
        condition2: cert
            .condition2
            .iter()
            .map(|w| UnlockEntry {
                partition: w.partition.to_string(),
                unlock_block: one_based(w.unlock_sites()),
            })
            .collect(),
        revalidated,
        partitions: separability(&l.spec, &all_partitions(&l.spec, &i.partitions)?)?,
    };
    Ok(Rendered {
        code: if certified { EXIT_OK } else { EXIT_NOT_CERTIFIED },
        value: report(cli, "certify", Some(echo(&l)), result),
        plain: None,
    })
}

fn decompose(cli: &Cli, i: &Input) -> Run<Rendered> {
    let l = load(&i.input)?;
    let s = close_with_cap(&l.spec.gens, cli.cap.unwrap_or(DEFAULT_CLOSURE_CAP))?;
    let tol = cli.tol.map(Tolerances::with_entry).unwrap_or_default();
    let check = verify_sector_decomposition::<f64>(&s, &tol)?;
    let mut forms = Vec::new();
    for (name, p) in all_partitions(&l.spec, &i.partitions)? {
        let separable = is_separable(&l.spec.gens, &p)?;
        let entry = if separable {
            let dev = separable_form_deviation::<f64>(&s, &p, tol.rank)?;
            SeparableFormCheck {
                name,
                partition: p.to_string(),
                separable,
                deviation: Some(dev),
                product_state_excluded: None,
                verified: dev <= tol.entry,
            }
        } else {
            let excluded = product_state_excluded::<f64>(&s, &p, tol.rank)?;
            SeparableFormCheck {
                name,
                partition: p.to_string(),
                separable,
                deviation: None,
                product_state_excluded: Some(excluded),
                verified: excluded,
            }
        };
        forms.push(entry);
    }
    let ok = check.verified && forms.iter().all(|f| f.verified);
    let result = Decomposition {
        tolerance: tol.entry,
        sectors: check.sectors,
        sector_dimension: check.sector_dimension,
        trace_error: check.trace_error,
        orthogonality_defect: check.orthogonality_defect,
        completeness_defect: check.completeness_defect,
        idempotence_defect: check.idempotence_defect,
        hermiticity_defect: check.hermiticity_defect,
        verified: check.verified,
        partitions: forms,
    };
    Ok(Rendered {
        code: if ok { EXIT_OK } else { EXIT_NOT_CERTIFIED },
        value: report(cli, "decompose", Some(echo(&l)), result),
        plain: None,
    })
}

fn record_entry(pr: &Protocol, r: &ShotRecord<f64>, residuals: bool) -> RecordEntry {
    RecordEntry {
        shot: r.shot,
        outcomes: r
            .outcomes
            .iter()
            .map(|o| BlockEntry {
                block: one_based(&pr.partition.blocks()[o.block]),
                index: o.index,
                labels: o.labels.clone(),
            })
            .collect(),
        probability: r.probability,
        purity: r.purity,
        genuine: r.genuine,
        residual_labels: r.residual_labels.clone(),
        residual: residuals.then(|| r.residual.iter().map(|z| [z.re, z.im]).collect()),
    }
}

fn unlock(
    cli: &Cli,
    i: &Input,
    shots: usize,
    exhaustive: bool,
    block: Option<usize>,
    residuals: bool,
) -> Run<Rendered> {
    let l = load(&i.input)?;
    let partition = match partitions(&l.spec, &i.partitions)?.as_slice() {
        [(_, p)] => p.clone(),
        [] => l.spec.partition("unlock").cloned().ok_or_else(|| {
            failure(
                "usage",
                "unlock needs --partition (the input has no partition named 'unlock')",
            )
        })?,
        _ => return Err(failure("usage", "unlock takes a single --partition")),
    };
    let gens = l.spec.gens.clone();
    let pr = match block {
        Some(0) => return Err(failure("usage", "--block is 1-based")),
        Some(b) => Protocol::new(gens, partition, b - 1, cli.seed, shots)?,
        None => Protocol::with_first_unlock_block(gens, partition, cli.seed, shots)?,
    };
    let mut sim = match cli.tol {
        Some(t) => Simulator::<f64>::with_tol(pr.clone(), t)?,
        None => Simulator::<f64>::new(pr.clone())?,
    };
    let records = if exhaustive {
        sim.enumerate(cli.cap.unwrap_or(DEFAULT_OUTCOME_CAP))?
    } else {
        sim.simulate()?
    };

    let mut tally: BTreeMap<Vec<usize>, OutcomeTally> = BTreeMap::new();
    for r in &records {
        let key: Vec<usize> = r.outcomes.iter().map(|o| o.index).collect();
        tally
            .entry(key.clone())
            .or_insert_with(|| OutcomeTally {
                outcome: key,
                labels: r.outcomes.iter().map(|o| o.labels.clone()).collect(),
                residual_labels: r.residual_labels.clone(),
                count: 0,
                probability: r.probability,
            })
            .count += 1;
    }
    let check = |rule| outcome_correlation_check(&records, rule);
    let label_law = records.iter().all(|r| r.label_law_holds());
    let min_purity = records.iter().map(|r| r.purity).fold(1.0, f64::min);
    let all_genuine = records.iter().all(|r| r.genuine);
    let purity_floor = 1.0 - cli.tol.unwrap_or(1e-9);
    let verified = label_law && all_genuine && min_purity >= purity_floor;
    let summary = UnlockSummary {
        records: records.len(),
        distinct_outcomes: tally.len(),
        min_purity,
        all_genuine,
        label_law,
        equality: check(CorrelationRule::Equality)?,
        product: check(CorrelationRule::Product)?,
        xor: check(CorrelationRule::Xor).ok(),
        verified,
    };
    let result = Unlock {
        partition: pr.partition.to_string(),
        unlock_block: one_based(pr.unlock_sites()),
        measuring_blocks: pr
            .measuring_blocks()
            .iter()
            .map(|&b| one_based(&pr.partition.blocks()[b]))
            .collect(),
        mode: if exhaustive { "exhaustive" } else { "sampled" },
        shots: if exhaustive { records.len() } else { shots },
        summary,
        outcomes: tally.into_values().collect(),
        records: records.iter().map(|r| record_entry(&pr, r, residuals)).collect(),
    };
    Ok(Rendered {
        code: if verified { EXIT_OK } else { EXIT_NOT_CERTIFIED },
        value: report(cli, "unlock", Some(echo(&l)), result),
        plain: None,
    })
}

fn list_catalog(cli: &Cli, name: Option<&str>) -> Run<Rendered> {
    #[derive(Serialize)]
    struct Entry {
        text: String,
    }
    match name {
        None => Ok(Rendered {
            code: EXIT_OK,
            value: report(
                cli,
                "catalog",
                None,
                CatalogListing {
                    entries: NAMES.to_vec(),
                },
            ),
            plain: Some(NAMES.iter().map(|n| format!("{n}\n")).collect()),
        }),
        Some(n) => {
            let spec = catalog(n)?;
            let text = spec.format();
            let l = Loaded {
                spec,
                source: "catalog",
                name: n.to_string(),
            };
            Ok(Rendered {
                code: EXIT_OK,
                value: report(cli, "catalog", Some(echo(&l)), Entry { text: text.clone() }),
                plain: Some(text),
            })
        }
    }
}
