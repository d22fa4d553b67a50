//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every verdict is exact, so the only pinned tolerances are the counts and
//! the wall-clock limits below.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coldepth::arrangement::{covers_space, monte_carlo_refuter, verify_certificate};
use coldepth::config::transversal_count;
use coldepth::cross::{find_cross_position, verify_cross_position, CrossOutcome, PairFamily, SearchBudget};
use coldepth::depth::{antipodal_check, colourful_depth_count, cone_contains, simplex_contains_origin};
use coldepth::search::{minimize_depth, random_configuration};
use coldepth::witness::{generate_witnesses, telescoping_sum, theorem_bound, verify_witness_set};
use coldepth::{parse_configuration, ColourSet, Configuration, Point, Transversal};

// Pinned counts and limits.
const ANTIPODAL_TUPLES: usize = 1_000;
const ANTIPODAL_LIMIT: Duration = Duration::from_secs(30);
const BOUND_CONFIGS: u64 = 100;
const BOUND_LIMIT: Duration = Duration::from_secs(120);
const LOW_DEPTH_CONFIGS: usize = 50;
const LOW_DEPTH_DESCENT_STEPS: usize = 400;
const LOW_DEPTH_MAX_ATTEMPTS: u64 = 1_000;
const REFUTER_SAMPLES: usize = 100_000;
const REFUTER_FAMILIES_PER_DIM: u64 = 100;
const COVERAGE_LIMIT: Duration = Duration::from_secs(120);
const SEARCH_SEED: u64 = 2;
const SEARCH_RESTARTS: usize = 20;
const SEARCH_STEPS: usize = 500;
const SEARCH_OTHER_SEEDS: u64 = 10;
const SEARCH_LIMIT: Duration = Duration::from_secs(300);

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let spent = start.elapsed();
    check(spent < limit, format!("took {spent:.1?}, limit {limit:?}"))
}

fn vertices(config: &Configuration, t: &Transversal) -> Vec<Point> {
    t.vertices(config).into_iter().cloned().collect()
}

/// The configurations shared by criteria 2 and 3.
fn bound_configs() -> Vec<Configuration> {
    (2..=4)
        .flat_map(|d| (0..BOUND_CONFIGS).map(move |s| random_configuration(d, 1_000 + s).unwrap()))
        .collect()
}

fn antipodal_equivalence() -> Verdict {
    let start = Instant::now();
    let mut tuples = 0;
    for d in 2..=3 {
        let mut seen = 0;
        let mut seed = 0u64;
        let mut rng = ChaCha8Rng::seed_from_u64(d as u64);
        while seen < ANTIPODAL_TUPLES {
            let cfg = random_configuration(d, 10_000 + seed).unwrap();
            seed += 1;
            for rank in sample(&mut rng, transversal_count(&cfg), 10).into_iter() {
                let t = Transversal::from_rank(d + 1, rank);
                let direct = simplex_contains_origin(&vertices(&cfg, &t)).unwrap().contains;
                for c in 0..=d {
                    check(
                        antipodal_check(&cfg, &t, c) == direct,
                        format!("d={d} transversal {:?} colour {c} disagrees", t.0),
                    )?;
                }
                seen += 1;
            }
        }
        tuples += seen;
    }
    within(ANTIPODAL_LIMIT, start)?;
    Ok(format!("{tuples} tuples, all colours agree ({:.1?})", start.elapsed()))
}

fn theorem_bound_holds(configs: &[Configuration]) -> Verdict {
    let start = Instant::now();
    for cfg in configs {
        let d = cfg.dim();
        let depth = colourful_depth_count(cfg);
        check(
            depth >= theorem_bound(d) && depth >= 2 * d,
            format!("d={d}: depth {depth} below bound: {}", cfg.to_json()),
        )?;
    }
    within(BOUND_LIMIT, start)?;
    Ok(format!("{} configurations over d=2,3,4, no violation ({:.1?})", configs.len(), start.elapsed()))
}

fn witness_construction(configs: &[Configuration]) -> Verdict {
    let (mut staged, mut fallback) = (0, 0);
    for (k, cfg) in configs.iter().enumerate() {
        let ws = generate_witnesses(cfg, k as u64).map_err(|e| e.to_string())?;
        let distinct: BTreeSet<&Transversal> = ws.simplices.iter().collect();
        check(
            verify_witness_set(cfg, &ws)
                && distinct.len() == ws.simplices.len()
                && ws.simplices.len() >= theorem_bound(cfg.dim()),
            format!("witness set failed on {}", cfg.to_json()),
        )?;
        for t in &ws.simplices {
            check(
                simplex_contains_origin(&vertices(cfg, t)).unwrap().contains,
                "simplex does not contain the origin",
            )?;
        }
        if ws.is_fallback() {
            fallback += 1;
        } else {
            staged += 1;
        }
    }
    check(staged > 0 && fallback > 0, format!("paths not both exercised: {staged} staged, {fallback} fallback"))?;
    Ok(format!("{} sets verified ({staged} staged, {fallback} by enumeration)", configs.len()))
}

fn low_depth_cross_positions() -> Verdict {
    let mut summary = Vec::new();
    for d in 2..=3usize {
        let mut found = 0;
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut attempt = 0;
        while found < LOW_DEPTH_CONFIGS {
            check(attempt < LOW_DEPTH_MAX_ATTEMPTS, format!("d={d}: only {found} low-depth configurations"))?;
            let report = minimize_depth(d, 1, LOW_DEPTH_DESCENT_STEPS, 50_000 + attempt).unwrap();
            attempt += 1;
            let cfg = report.best_config;
            let depth = colourful_depth_count(&cfg);
            if depth >= d * d + d || !seen.insert(cfg.to_json()) {
                continue;
            }
            found += 1;
            for omit in 0..=d {
                let set = ColourSet::omitting(d, omit).unwrap();
                let outcome = find_cross_position(&cfg, &set, &SearchBudget::default(), attempt).unwrap();
                match outcome {
                    CrossOutcome::Found(cp) => check(
                        cp.certificate.covered && verify_cross_position(&cfg, &cp),
                        format!("d={d}: certificate does not verify"),
                    )?,
                    CrossOutcome::NotFound(_) => {
                        return Err(format!("d={d} depth {depth}: no cross position omitting colour {omit}: {}", cfg.to_json()))
                    }
                }
            }
        }
        summary.push(format!("d={d}: {found} configurations"));
    }
    Ok(format!("{}, every colour subset found and verified", summary.join(", ")))
}

fn random_pair_family(rng: &mut ChaCha8Rng, d: usize) -> Vec<[Point; 2]> {
    loop {
        let pairs: Vec<[Point; 2]> = (0..d)
            .map(|_| {
                let mut p = || Point::from_ints(&(0..d).map(|_| rng.random_range(-6i64..=6)).collect::<Vec<_>>());
                [p(), p()]
            })
            .collect();
        if pairs.iter().flatten().all(|p| !p.is_zero()) {
            return pairs;
        }
    }
}

fn coverage_decision() -> Verdict {
    let start = Instant::now();
    // cross-polytope directions
    for d in 1..=4 {
        let pairs: Vec<[Point; 2]> = (0..d).map(|i| [Point::unit(d, i), -&Point::unit(d, i)]).collect();
        let cones = PairFamily::new(pairs).unwrap().cones();
        let cert = covers_space(&cones);
        check(cert.covered && verify_certificate(&cones, &cert), format!("cross-polytope d={d} not covered"))?;
    }
    // 2d points in an open halfspace
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for d in 1..=4 {
        for _ in 0..5 {
            let normal = Point::from_ints(&(0..d).map(|_| rng.random_range(-4i64..=4)).collect::<Vec<_>>());
            if normal.is_zero() {
                continue;
            }
            let pairs: Vec<[Point; 2]> = (0..d)
                .map(|_| {
                    let mut p = || loop {
                        let q = Point::from_ints(&(0..d).map(|_| rng.random_range(-6i64..=6)).collect::<Vec<_>>());
                        if normal.dot(&q).is_positive() {
                            return q;
                        }
                    };
                    [p(), p()]
                })
                .collect();
            let cones = PairFamily::new(pairs).unwrap().cones();
            let cert = covers_space(&cones);
            check(!cert.covered, format!("halfspace family covered in d={d}"))?;
            let x = cert.uncovered_direction.clone().ok_or("uncovered without a witness")?;
            check(!x.is_zero(), "zero witness")?;
            for k in &cones {
                check(!cone_contains(k, &x).unwrap(), "witness inside a cone")?;
            }
        }
    }
    // exact checker vs Monte Carlo refuter
    let (mut covered, mut uncovered) = (0, 0);
    for d in 2..=3 {
        for f in 0..REFUTER_FAMILIES_PER_DIM {
            let mut rng = ChaCha8Rng::seed_from_u64(1_000 * d as u64 + f);
            let cones = PairFamily::new(random_pair_family(&mut rng, d)).unwrap().cones();
            let cert = covers_space(&cones);
            check(verify_certificate(&cones, &cert), "certificate does not verify")?;
            let refuted = monte_carlo_refuter(&cones, REFUTER_SAMPLES, f);
            check(
                cert.covered == refuted.is_none(),
                format!("d={d} family {f}: exact covered={} but refuter {:?}", cert.covered, refuted),
            )?;
            if cert.covered {
                covered += 1;
            } else {
                uncovered += 1;
            }
        }
    }
    within(COVERAGE_LIMIT, start)?;
    Ok(format!(
        "cross-polytopes covered d<=4, halfspace families uncovered, {} families agree ({covered} covered) ({:.1?})",
        covered + uncovered,
        start.elapsed()
    ))
}

/// Closed segment or triangle containment of the origin, by hand rules.
fn oracle_contains(v: &[Vec<BigRational>]) -> bool {
    match v.len() {
        2 => !(&v[0][0] * &v[1][0]).is_positive(),
        3 => {
            let cross = |a: &[BigRational], b: &[BigRational]| &a[0] * &b[1] - &a[1] * &b[0];
            let s = [cross(&v[0], &v[1]), cross(&v[1], &v[2]), cross(&v[2], &v[0])];
            if s.iter().all(|x| x.is_zero()) {
                // all vertices on one line through the origin: check by projection
                let axis = v.iter().find(|p| p.iter().any(|c| !c.is_zero()));
                let Some(axis) = axis else { return true };
                let t: Vec<BigRational> = v.iter().map(|p| &p[0] * &axis[0] + &p[1] * &axis[1]).collect();
                return t.iter().any(|x| !x.is_positive()) && t.iter().any(|x| !x.is_negative());
            }
            s.iter().all(|x| !x.is_negative()) || s.iter().all(|x| !x.is_positive())
        }
        _ => unreachable!(),
    }
}

fn brute_depth(cfg: &Configuration) -> usize {
    (0..transversal_count(cfg))
        .filter(|&r| {
            let t = Transversal::from_rank(cfg.size(), r);
            let v: Vec<Vec<BigRational>> = vertices(cfg, &t).iter().map(|p| p.coords().to_vec()).collect();
            oracle_contains(&v)
        })
        .count()
}

fn known_values() -> Verdict {
    let triangle = r#"[["1","0"],["0","1"],["-1","-1"]]"#;
    let symmetric = parse_configuration(&format!(r#"{{"d":2,"colours":[{triangle},{triangle},{triangle}]}}"#)).unwrap();
    // Hand count: a triple of the three triangle vertices contains the origin
    // exactly when they are all distinct, 3! = 6 of the 27.
    let hand = (0..27)
        .filter(|&r| {
            let t = Transversal::from_rank(3, r);
            t.0.iter().collect::<BTreeSet<_>>().len() == 3
        })
        .count();
    let depth = colourful_depth_count(&symmetric);
    check(depth == 6 && hand == 6 && brute_depth(&symmetric) == 6, format!("symmetric depth {depth}, hand {hand}"))?;

    let lines = [
        (r#"{"d":1,"colours":[[["1"],["-1"]],[["2"],["-3"]]]}"#, 2),
        (r#"{"d":1,"colours":[[["1"],["-1"]],[["1/2"],["-1/2"]]]}"#, 2),
        (r#"{"d":1,"colours":[[["1"],["2"]],[["-1"],["1"]]]}"#, 2),
    ];
    for (text, expected) in lines {
        let cfg = parse_configuration(text).unwrap();
        let (depth, oracle) = (colourful_depth_count(&cfg), brute_depth(&cfg));
        check(depth == expected && oracle == expected, format!("{text}: depth {depth}, oracle {oracle}"))?;
    }
    Ok("symmetric d=2 depth 6 = hand count; d=1 examples match 4-case enumeration".into())
}

fn search_optimum() -> Verdict {
    let start = Instant::now();
    let report = minimize_depth(2, SEARCH_RESTARTS, SEARCH_STEPS, SEARCH_SEED).map_err(|e| e.to_string())?;
    check(report.best_depth == 5, format!("seed {SEARCH_SEED} reached depth {}", report.best_depth))?;
    check(colourful_depth_count(&report.best_config) == 5, "best configuration does not re-evaluate to 5")?;
    let mut lowest = usize::MAX;
    for seed in 0..SEARCH_OTHER_SEEDS {
        let r = minimize_depth(2, SEARCH_RESTARTS, SEARCH_STEPS, 100 + seed).map_err(|e| e.to_string())?;
        check(r.best_depth >= 4, format!("seed {} reported {}", 100 + seed, r.best_depth))?;
        lowest = lowest.min(r.best_depth);
    }
    within(SEARCH_LIMIT, start)?;
    Ok(format!(
        "seed {SEARCH_SEED}: depth 5 with {SEARCH_RESTARTS}x{SEARCH_STEPS}; {SEARCH_OTHER_SEEDS} more seeds, lowest {lowest} ({:.1?})",
        start.elapsed()
    ))
}

fn bound_identity() -> Verdict {
    for d in 1..=64usize {
        let direct: usize = (0..).map(|k: usize| d as isize + 1 - 2 * k as isize).take_while(|&t| t > 0).sum::<isize>() as usize;
        check(theorem_bound(d) == direct && telescoping_sum(d) == direct, format!("d={d}"))?;
        if d >= 4 {
            check(theorem_bound(d) > 2 * d, format!("d={d} does not exceed 2d"))?;
        }
    }
    Ok("d=1..64 match the telescoping sum; exceeds 2d from d=4".into())
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run_cli(args: &[String]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_coldepth")).args(args).output().unwrap();
    (out.status.code(), out.stdout)
}

/// Rebuilds the argument list recorded in a report's manifest.
fn argv_from_manifest(m: &serde_json::Value) -> Vec<String> {
    let mut args = vec![m["command"].as_str().unwrap().to_string()];
    for input in m["inputs"].as_array().unwrap() {
        args.push(input["path"].as_str().unwrap().to_string());
    }
    for (k, v) in m["flags"].as_object().unwrap() {
        args.push(if k == "d" { "-d".into() } else { format!("--{k}") });
        args.push(v.as_str().unwrap().to_string());
    }
    if let Some(seed) = m["seed"].as_u64() {
        args.extend(["--seed".to_string(), seed.to_string()]);
    }
    args
}

fn cli_determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("coldepth-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let gen_path = dir.join("gen.json").to_string_lossy().into_owned();
    let (code, bytes) = run_cli(&["gen", "-d", "2", "--seed", "41"].map(String::from));
    check(code == Some(0), "gen failed")?;
    std::fs::write(&gen_path, &bytes).unwrap();

    let sym = data("symmetric.json");
    let commands: Vec<Vec<String>> = [
        vec!["gen", "-d", "3", "--seed", "9"],
        vec!["depth", &sym],
        vec!["ddepth", &sym, "--colours", "2,3", "--dir", "-1,1/3"],
        vec!["cross", &gen_path, "--colours", "1,3", "--seed", "4"],
        vec!["cross-check", &data("cross_polytope.json")],
        vec!["witness", &gen_path, "--seed", "6"],
        vec!["search", "-d", "2", "--restarts", "4", "--steps", "80", "--seed", "12"],
        vec!["verify", &gen_path, "--seed", "1"],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();

    for args in &commands {
        let (code, first) = run_cli(args);
        check(code == Some(0), format!("{} exited with {code:?}", args[0]))?;
        let report: serde_json::Value = serde_json::from_slice(&first).map_err(|e| e.to_string())?;
        let replay = argv_from_manifest(&report["manifest"]);
        let (code2, second) = run_cli(&replay);
        check(code2 == code && first == second, format!("{} differs when replayed as {replay:?}", args[0]))?;
    }
    std::fs::remove_dir_all(&dir).unwrap();
    Ok(format!("{} commands replayed from their manifests byte-identically", commands.len()))
}

fn main() {
    let configs = bound_configs();
    let criteria: Vec<Criterion> = vec![
        ("antipodal equivalence", Box::new(antipodal_equivalence)),
        ("lower bound on random configurations", Box::new(|| theorem_bound_holds(&configs))),
        ("witness construction", Box::new(|| witness_construction(&configs))),
        ("cross positions below depth d^2+d", Box::new(low_depth_cross_positions)),
        ("coverage decision", Box::new(coverage_decision)),
        ("known values", Box::new(known_values)),
        ("search reaches depth 5 at d=2", Box::new(search_optimum)),
        ("bound identity", Box::new(bound_identity)),
        ("CLI determinism", Box::new(cli_determinism)),
    ];
    let mut failures = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", n + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL {name}: {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
