//! Random valid configurations and hill descent on colourful depth.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{validate, Configuration};
use crate::depth::colourful_depth_count;
use crate::error::{Error, Result};
use crate::exact::{Point, Rational};
use crate::witness::theorem_bound;

/// Sampled coordinates are `k / 2^16` with `|k| ≤ 2^16`.
pub const DENOMINATOR_BITS: u32 = 16;
const RETRY_CAP: usize = 1000;

/// Independent stream seed for sub-task `index` of a run seeded by `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn sample_point<R: Rng>(rng: &mut R, d: usize) -> Point {
    let scale: i64 = 1 << DENOMINATOR_BITS;
    Point::new(
        (0..d)
            .map(|_| {
                Rational::new(
                    BigInt::from(rng.random_range(-scale..=scale)),
                    BigInt::from(scale),
                )
            })
            .collect(),
    )
}

/// The negated sum of `points`: appending it puts the origin at the
/// centroid of the class.
fn anchor_for(points: &[Point], d: usize) -> Point {
    let sum = points.iter().fold(Point::zero(d), |acc, p| acc.add(p));
    -&sum
}

fn sample_colour<R: Rng>(rng: &mut R, d: usize) -> Vec<Point> {
    let mut pts: Vec<Point> = (0..d).map(|_| sample_point(rng, d)).collect();
    let anchor = anchor_for(&pts, d);
    pts.push(anchor);
    pts
}

/// A configuration with the origin in the interior of every colour's hull
/// and all points in general position, drawn from a seeded generator.
pub fn random_configuration(d: usize, seed: u64) -> Result<Configuration> {
    if d == 0 {
        return Err(Error::Input("dimension d must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_CAP {
        let colours = (0..=d).map(|_| sample_colour(&mut rng, d)).collect();
        let config = Configuration::new(d, colours)?;
        if validate(&config).all_ok() {
            return Ok(config);
        }
    }
    Err(Error::Precondition(format!(
        "no valid configuration after {RETRY_CAP} draws (d = {d}, seed = {seed})"
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    /// `⌊(d+2)²/4⌋`
    pub lower_bound: usize,
    /// `2d`
    pub prior_lower: usize,
    /// `d²+1`
    pub conjectured_min: usize,
    /// `⌈d(d+1)/5⌉`
    pub quadratic_lower: usize,
}

impl Comparison {
    pub fn for_dim(d: usize) -> Self {
        Comparison {
            lower_bound: theorem_bound(d),
            prior_lower: 2 * d,
            conjectured_min: d * d + 1,
            quadratic_lower: (d * (d + 1)).div_ceil(5),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub restart: usize,
    pub iteration: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub d: usize,
    pub best_config: Configuration,
    pub best_depth: usize,
    pub best_restart: usize,
    pub evaluations: usize,
    pub history: Vec<HistoryEntry>,
    pub comparison: Comparison,
}

struct RestartOutcome {
    config: Configuration,
    depth: usize,
    evaluations: usize,
    history: Vec<HistoryEntry>,
}

/// Counts the depth and fails loudly if it undercuts the proven bound.
fn checked_depth(config: &Configuration) -> Result<usize> {
    let depth = colourful_depth_count(config);
    let bound = theorem_bound(config.dim());
    if depth < bound {
        return Err(Error::Violation(format!(
            "configuration with depth {depth} below the lower bound {bound}: {}",
            config.to_json()
        )));
    }
    Ok(depth)
}

/// One proposal: a fresh point replaces a uniformly chosen one. Replacing a
/// free point that pushes the origin out of its colour's hull re-anchors the
/// colour; replacing the anchor itself is rejected in that case. Returns
/// `None` for a rejected proposal.
fn propose<R: Rng>(rng: &mut R, config: &Configuration) -> Option<Configuration> {
    let d = config.dim();
    let colour = rng.random_range(0..=d);
    let index = rng.random_range(0..=d);
    let p = sample_point(rng, d);
    let next = config.with_point(colour, index, p).ok()?;
    if next.colour_contains_origin(colour) {
        return Some(next);
    }
    if index == d {
        return None;
    }
    let anchor = anchor_for(&next.colours()[colour][..d], d);
    next.with_point(colour, d, anchor).ok()
}

fn run_restart(d: usize, steps: usize, seed: u64, restart: usize) -> Result<RestartOutcome> {
    let restart_seed = derive_seed(seed, restart as u64);
    let mut config = random_configuration(d, restart_seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(restart_seed, u64::MAX));
    let mut depth = checked_depth(&config)?;
    let mut evaluations = 1;
    let mut history = vec![HistoryEntry {
        restart,
        iteration: 0,
        depth,
    }];
    let mut iteration = 0;
    let mut stale = 0;
    while stale < steps {
        iteration += 1;
        let Some(candidate) = propose(&mut rng, &config) else {
            stale += 1;
            continue;
        };
        debug_assert!(candidate.origin_in_core());
        let cand_depth = checked_depth(&candidate)?;
        evaluations += 1;
        if cand_depth < depth {
            config = candidate;
            depth = cand_depth;
            history.push(HistoryEntry {
                restart,
                iteration,
                depth,
            });
            stale = 0;
        } else {
            stale += 1;
        }
    }
    Ok(RestartOutcome {
        config,
        depth,
        evaluations,
        history,
    })
}

/// Randomized-restart hill descent on colourful depth over configurations
/// with the origin in the core. Restarts run in parallel; the best result is
/// chosen by depth, ties going to the lowest restart index.
pub fn minimize_depth(d: usize, restarts: usize, steps: usize, seed: u64) -> Result<SearchReport> {
    if d == 0 || restarts == 0 || steps == 0 {
        return Err(Error::Input("d, restarts and steps must be positive".into()));
    }
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|r| run_restart(d, steps, seed, r))
        .collect::<Result<_>>()?;
    let (best_restart, best) = outcomes
        .iter()
        .enumerate()
        .min_by_key(|(r, o)| (o.depth, *r))
        .expect("at least one restart");
    Ok(SearchReport {
        d,
        best_config: best.config.clone(),
        best_depth: best.depth,
        best_restart,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        history: outcomes.iter().flat_map(|o| o.history.clone()).collect(),
        comparison: Comparison::for_dim(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_pairs_straddle_zero() {
        for seed in 0..20 {
            let cfg = random_configuration(1, seed).unwrap();
            for class in cfg.colours() {
                assert_eq!(class[0], -&class[1]);
                assert!(!class[0].is_zero());
            }
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_configuration(3, 42).unwrap();
        assert_eq!(a, random_configuration(3, 42).unwrap());
        assert_ne!(a, random_configuration(3, 43).unwrap());
        assert!(validate(&a).all_ok());
    }

    #[test]
    fn comparison_constants() {
        let c = Comparison::for_dim(3);
        assert_eq!((c.lower_bound, c.prior_lower, c.conjectured_min, c.quadratic_lower), (6, 6, 10, 3));
        assert_eq!(Comparison::for_dim(4).quadratic_lower, 4);
    }

    #[test]
    fn proposals_keep_origin_in_core() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut cfg = random_configuration(2, 5).unwrap();
        for _ in 0..200 {
            if let Some(next) = propose(&mut rng, &cfg) {
                assert!(next.origin_in_core());
                cfg = next;
            }
        }
    }

    #[test]
    fn history_strictly_decreases_per_restart() {
        let report = minimize_depth(2, 3, 60, 11).unwrap();
        for r in 0..3 {
            let depths: Vec<usize> = report
                .history
                .iter()
                .filter(|h| h.restart == r)
                .map(|h| h.depth)
                .collect();
            assert!(depths.windows(2).all(|w| w[1] < w[0]));
        }
        assert_eq!(colourful_depth_count(&report.best_config), report.best_depth);
        assert!(report.best_depth >= 4);
    }

    #[test]
    fn origin_point_is_never_accepted() {
        let cfg = random_configuration(2, 9).unwrap();
        let base = colourful_depth_count(&cfg);
        let with_origin = cfg.with_point(0, 0, Point::zero(2)).unwrap();
        assert!(with_origin.origin_in_core());
        let depth = colourful_depth_count(&with_origin);
        assert!(depth >= 9);
        assert!(depth >= base || base >= 9);
    }
}
