//! The `coldepth` command line: argument parsing, manifests and exit codes.
//!
//! Every report is one JSON object on stdout carrying a `manifest` member;
//! a one-line summary goes to stderr. Exit 0 on success, 1 when an
//! invariant or bound is violated, 2 on bad input or usage.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{parse_configuration, transversal_count, validate, Configuration, Transversal};
use crate::cross::{find_cross_position, is_deformed_cross_position, parse_pairs, CrossOutcome, SearchBudget};
use crate::depth::{antipodal_check, colourful_depth, d_depth, simplex_contains_origin, ColourSet};
use crate::error::{Error, Result};
use crate::exact::Point;
use crate::search::{minimize_depth, random_configuration};
use crate::witness::{generate_witnesses, theorem_bound, verify_witness_set};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Transversals sampled by `verify` for the antipodal cross-check.
const VERIFY_SAMPLES: usize = 256;

#[derive(Parser, Debug)]
#[command(name = "coldepth", version, about = "Exact colourful simplicial depth toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random configuration in general position with the origin inside.
    Gen {
        #[arg(short = 'd')]
        d: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Colourful depth of the origin with one witness per simplex.
    Depth { config: String },
    /// Number of D-coloured cones containing a direction.
    Ddepth {
        config: String,
        /// d colour labels, 1-based, comma separated.
        #[arg(long)]
        colours: String,
        /// Direction as comma separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
    },
    /// Pairs in deformed cross position on the colours D.
    Cross {
        config: String,
        #[arg(long)]
        colours: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Whether the 2^d cones of a pairs file cover space.
    CrossCheck { pairs: String },
    /// Staged witness simplices.
    Witness {
        config: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hill descent on the depth from seeded random starts.
    Search {
        #[arg(short = 'd')]
        d: usize,
        #[arg(long)]
        restarts: usize,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Full invariant suite on one configuration.
    Verify {
        config: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct InputRecord {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    inputs: Vec<InputRecord>,
    seed: Option<u64>,
    flags: BTreeMap<String, String>,
    version: String,
    output_sha256: String,
}

struct Report {
    result: Value,
    summary: String,
    violation: bool,
}

struct Run {
    command: &'static str,
    inputs: Vec<InputRecord>,
    seed: Option<u64>,
    flags: BTreeMap<String, String>,
}

impl Run {
    fn new(command: &'static str) -> Self {
        Run {
            command,
            inputs: Vec::new(),
            seed: None,
            flags: BTreeMap::new(),
        }
    }

    fn read(&mut self, path: &str) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
        self.inputs.push(InputRecord {
            path: path.to_string(),
            sha256: hex_digest(&bytes),
        });
        String::from_utf8(bytes).map_err(|_| Error::Input(format!("{path}: not UTF-8")))
    }

    fn config(&mut self, path: &str) -> Result<Configuration> {
        let text = self.read(path)?;
        parse_configuration(&text).map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse {
                location: format!("{path}: {location}"),
                message,
            },
            other => other,
        })
    }

    fn flag(&mut self, name: &str, value: impl ToString) {
        self.flags.insert(name.to_string(), value.to_string());
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses a 1-based comma separated colour list into a 0-based set.
fn parse_colours(d: usize, text: &str) -> Result<ColourSet> {
    let labels = text
        .split(',')
        .map(|s| {
            let s = s.trim();
            match s.parse::<usize>() {
                Ok(n) if (1..=d + 1).contains(&n) => Ok(n - 1),
                _ => Err(Error::Input(format!("colour label {s:?} is not in 1..={}", d + 1))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ColourSet::new(d, labels)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let (run, outcome) = dispatch(cli.command);
    match outcome {
        Ok(report) => {
            let Report {
                mut result,
                summary,
                violation,
            } = report;
            let digest = hex_digest(result.to_string().as_bytes());
            let manifest = RunManifest {
                command: run.command.to_string(),
                inputs: run.inputs,
                seed: run.seed,
                flags: run.flags,
                version: env!("CARGO_PKG_VERSION").to_string(),
                output_sha256: digest,
            };
            if let Value::Object(map) = &mut result {
                map.insert("manifest".into(), to_value(&manifest));
            } else {
                result = json!({ "result": result, "manifest": manifest });
            }
            let text = serde_json::to_string_pretty(&result).expect("json value");
            let _ = writeln!(out, "{text}");
            let _ = writeln!(err, "{summary}");
            if violation {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_violation() {
                EXIT_VIOLATION
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn dispatch(command: Command) -> (Run, Result<Report>) {
    match command {
        Command::Gen { d, seed } => {
            let mut run = Run::new("gen");
            run.seed = Some(seed);
            run.flag("d", d);
            let r = cmd_gen(d, seed);
            (run, r)
        }
        Command::Depth { config } => {
            let mut run = Run::new("depth");
            let r = cmd_depth(&mut run, &config);
            (run, r)
        }
        Command::Ddepth { config, colours, dir } => {
            let mut run = Run::new("ddepth");
            run.flag("colours", &colours);
            run.flag("dir", &dir);
            let r = cmd_ddepth(&mut run, &config, &colours, &dir);
            (run, r)
        }
        Command::Cross { config, colours, seed } => {
            let mut run = Run::new("cross");
            run.seed = Some(seed);
            run.flag("colours", &colours);
            let r = cmd_cross(&mut run, &config, &colours, seed);
            (run, r)
        }
        Command::CrossCheck { pairs } => {
            let mut run = Run::new("cross-check");
            let r = cmd_cross_check(&mut run, &pairs);
            (run, r)
        }
        Command::Witness { config, seed } => {
            let mut run = Run::new("witness");
            run.seed = Some(seed);
            let r = cmd_witness(&mut run, &config, seed);
            (run, r)
        }
        Command::Search {
            d,
            restarts,
            steps,
            seed,
        } => {
            let mut run = Run::new("search");
            run.seed = Some(seed);
            run.flag("d", d);
            run.flag("restarts", restarts);
            run.flag("steps", steps);
            let r = cmd_search(d, restarts, steps, seed);
            (run, r)
        }
        Command::Verify { config, seed } => {
            let mut run = Run::new("verify");
            run.seed = Some(seed);
            let r = cmd_verify(&mut run, &config, seed);
            (run, r)
        }
    }
}

fn cmd_gen(d: usize, seed: u64) -> Result<Report> {
    let config = random_configuration(d, seed)?;
    Ok(Report {
        result: to_value(&config),
        summary: format!("generated d={d} configuration from seed {seed}"),
        violation: false,
    })
}

fn cmd_depth(run: &mut Run, path: &str) -> Result<Report> {
    let config = run.config(path)?;
    let d = config.dim();
    let report = colourful_depth(&config);
    let in_core = config.origin_in_core();
    let bound = theorem_bound(d);
    let violation = in_core && (report.depth < bound || report.depth < 2 * d);
    let mut result = to_value(&report);
    result["d"] = json!(d);
    result["origin_in_core"] = json!(in_core);
    result["lower_bound"] = json!(bound);
    if violation {
        result["violation"] = json!({
            "message": format!("depth {} below the lower bound {bound} with the origin in the core", report.depth),
            "configuration": config,
        });
    }
    Ok(Report {
        result,
        summary: format!("depth {} (lower bound {bound})", report.depth),
        violation,
    })
}

fn cmd_ddepth(run: &mut Run, path: &str, colours: &str, dir: &str) -> Result<Report> {
    let config = run.config(path)?;
    let d = config.dim();
    let set = parse_colours(d, colours)?;
    let x = Point::parse_list(dir)?;
    x.expect_dim(d)?;
    let depth = d_depth(&config, &set, &x)?;
    Ok(Report {
        result: json!({
            "d": d,
            "colours": set,
            "direction": x,
            "d_depth": depth,
        }),
        summary: format!("D-depth {depth}"),
        violation: false,
    })
}

fn cmd_cross(run: &mut Run, path: &str, colours: &str, seed: u64) -> Result<Report> {
    let config = run.config(path)?;
    let d = config.dim();
    let set = parse_colours(d, colours)?;
    let budget = SearchBudget::default();
    let outcome = find_cross_position(&config, &set, &budget, seed)?;
    // Below depth d²+d a cross position must exist, and the exhaustive
    // candidate scan cannot miss it.
    let (summary, violation) = match &outcome {
        CrossOutcome::Found(cp) => (
            format!("cross position found (direction D-depth {})", cp.direction_d_depth),
            false,
        ),
        CrossOutcome::NotFound(f) => {
            let exhaustive = budget.exhaustive_cells && d <= budget.max_exhaustive_dim;
            let depth = if exhaustive {
                crate::depth::colourful_depth_count(&config)
            } else {
                usize::MAX
            };
            (
                format!("no cross position after {} candidates", f.candidates_tried),
                depth < d * d + d,
            )
        }
    };
    Ok(Report {
        result: to_value(&outcome),
        summary,
        violation,
    })
}

fn cmd_cross_check(run: &mut Run, path: &str) -> Result<Report> {
    let text = run.read(path)?;
    let family = parse_pairs(&text)?;
    let cert = is_deformed_cross_position(&family.pairs)?;
    let summary = if cert.covered {
        format!("covered ({} cells)", cert.cells_checked)
    } else {
        "not covered".to_string()
    };
    Ok(Report {
        result: to_value(&cert),
        summary,
        violation: false,
    })
}

fn cmd_witness(run: &mut Run, path: &str, seed: u64) -> Result<Report> {
    let config = run.config(path)?;
    let ws = generate_witnesses(&config, seed)?;
    let ok = verify_witness_set(&config, &ws);
    let mut result = to_value(&ws);
    result["verified"] = json!(ok);
    let mode = if ws.is_fallback() { "enumeration" } else { "staged" };
    Ok(Report {
        result,
        summary: format!(
            "{} simplices ({mode}), bound {}, verified {ok}",
            ws.simplices.len(),
            ws.bound
        ),
        violation: !ok,
    })
}

fn cmd_search(d: usize, restarts: usize, steps: usize, seed: u64) -> Result<Report> {
    if restarts == 0 {
        return Err(Error::Input("--restarts must be positive".into()));
    }
    let report = minimize_depth(d, restarts, steps, seed)?;
    Ok(Report {
        summary: format!(
            "best depth {} at restart {} ({} evaluations)",
            report.best_depth, report.best_restart, report.evaluations
        ),
        result: to_value(&report),
        violation: false,
    })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    status: &'static str,
    detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: String) -> Self {
        Check {
            name,
            status: if ok { "pass" } else { "fail" },
            detail,
        }
    }

    fn skipped(name: &'static str, detail: &str) -> Self {
        Check {
            name,
            status: "skipped",
            detail: detail.to_string(),
        }
    }
}

fn cmd_verify(run: &mut Run, path: &str, seed: u64) -> Result<Report> {
    let config = run.config(path)?;
    let d = config.dim();
    let validation = validate(&config);
    let mut checks = Vec::new();

    // antipodal equivalence on sampled transversals
    let total = transversal_count(&config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranks: Vec<usize> = if total <= VERIFY_SAMPLES {
        (0..total).collect()
    } else {
        sample(&mut rng, total, VERIFY_SAMPLES).into_vec()
    };
    ranks.sort_unstable();
    let mut disagreement = None;
    for &rank in &ranks {
        let t = Transversal::from_rank(config.size(), rank);
        let vertices: Vec<Point> = t.vertices(&config).into_iter().cloned().collect();
        let direct = simplex_contains_origin(&vertices)?.contains;
        if let Some(c) = (0..config.size()).find(|&c| antipodal_check(&config, &t, c) != direct) {
            disagreement = Some((t, c));
            break;
        }
    }
    checks.push(Check::new(
        "antipodal_equivalence",
        disagreement.is_none(),
        match &disagreement {
            None => format!("{} transversals agree for every colour", ranks.len()),
            Some((t, c)) => format!("transversal {:?} disagrees at colour {}", t.0, c + 1),
        },
    ));

    let depth = colourful_depth(&config);
    let bound = theorem_bound(d);
    if validation.zero_in_core {
        checks.push(Check::new(
            "lower_bound",
            depth.depth >= bound,
            format!("depth {} vs bound {bound}", depth.depth),
        ));
        checks.push(Check::new(
            "prior_bound",
            depth.depth >= 2 * d,
            format!("depth {} vs 2d = {}", depth.depth, 2 * d),
        ));
    } else {
        checks.push(Check::skipped("lower_bound", "origin not in the core"));
        checks.push(Check::skipped("prior_bound", "origin not in the core"));
    }
    if validation.zero_interior {
        let ws = generate_witnesses(&config, seed)?;
        let ok = verify_witness_set(&config, &ws) && ws.simplices.len() <= depth.depth;
        checks.push(Check::new(
            "witness_set",
            ok,
            format!("{} simplices, bound {bound}", ws.simplices.len()),
        ));
    } else {
        checks.push(Check::skipped("witness_set", "origin not interior to every colour"));
    }

    let failed: Vec<&str> = checks.iter().filter(|c| c.status == "fail").map(|c| c.name).collect();
    let passed = failed.is_empty();
    let mut result = json!({
        "d": d,
        "validation": validation,
        "depth": depth.depth,
        "checks": checks,
        "passed": passed,
    });
    if !passed {
        result["counterexample"] = to_value(&config);
    }
    Ok(Report {
        result,
        summary: if passed {
            "all checks passed".to_string()
        } else {
            format!("failed: {}", failed.join(", "))
        },
        violation: !passed,
    })
}
