//! Staged construction of many origin-containing colourful simplices.
//!
//! Stage `i` (colour `i`, 0-based) finds pairs on the other colours in
//! deformed cross position; every colour-`i` vertex `v` not consumed by an
//! earlier stage has its antipode in one of the `2^d` cones of the pairs,
//! and `v` together with that cone's generators is a simplex containing
//! the origin. Any miss falls back to exhaustive enumeration.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Configuration, Transversal};
use crate::cross::{find_cross_position, CrossOutcome, CrossPosition, SearchBudget, MAX_COVERAGE_DIM};
use crate::depth::{containing_transversals, simplex_contains_origin, ColourSet};
use crate::error::{Error, Result};
use crate::exact::IntDir;
use crate::search::derive_seed;

/// `⌊(d+2)²/4⌋`.
pub fn theorem_bound(d: usize) -> usize {
    (d + 2) * (d + 2) / 4
}

/// `(d+1) + (d−1) + (d−3) + …`, positive terms only.
pub fn telescoping_sum(d: usize) -> usize {
    stage_quotas(d).sum()
}

/// Minimum number of simplices each stage contributes.
fn stage_quotas(d: usize) -> impl Iterator<Item = usize> {
    (0..).map(move |i| d as isize + 1 - 2 * i as isize).take_while(|&q| q > 0).map(|q| q as usize)
}

/// Candidate budget used by [`generate_witnesses`]. Below depth `d²+d` an
/// antipode always works, so the exhaustive cell scan would only be reached
/// on configurations where the fallback is needed anyway.
pub fn default_budget() -> SearchBudget {
    SearchBudget::heuristic(64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    /// Colour whose vertices are consumed (0-based).
    pub colour: usize,
    pub quota: usize,
    /// Pairs on the remaining colours, absent if the search failed.
    pub cross_position: Option<CrossPosition>,
    /// Colour-`colour` vertices that produced a simplex, ascending.
    pub vertices_consumed: Vec<usize>,
    pub emitted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fallback {
    /// Stage at which the construction gave up.
    pub stage: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub d: usize,
    pub bound: usize,
    pub simplices: Vec<Transversal>,
    pub stage_log: Vec<StageRecord>,
    /// Set when the simplices come from full enumeration.
    pub fallback: Option<Fallback>,
}

impl WitnessSet {
    pub fn is_fallback(&self) -> bool {
        self.fallback.is_some()
    }
}

pub fn generate_witnesses(config: &Configuration, seed: u64) -> Result<WitnessSet> {
    generate_witnesses_with(config, seed, &default_budget())
}

pub fn generate_witnesses_with(
    config: &Configuration,
    seed: u64,
    budget: &SearchBudget,
) -> Result<WitnessSet> {
    if !config.origin_in_interior() {
        return Err(Error::Precondition(
            "origin must lie in the interior of every colour's hull".into(),
        ));
    }
    let d = config.dim();
    let bound = theorem_bound(d);
    let mut simplices = Vec::new();
    let mut stage_log = Vec::new();
    // used[c] = point indices of colour c appearing in an earlier cross position
    let mut used: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); config.size()];
    if d > MAX_COVERAGE_DIM {
        let reason = format!("cross positions are not certified above d = {MAX_COVERAGE_DIM}");
        return Ok(fallback(config, 0, reason, stage_log));
    }

    for (stage, quota) in stage_quotas(d).enumerate() {
        let colour = stage;
        let colours = ColourSet::omitting(d, colour)?;
        let outcome = find_cross_position(config, &colours, budget, derive_seed(seed, stage as u64))?;
        let cp = match outcome {
            CrossOutcome::Found(cp) => cp,
            CrossOutcome::NotFound(fail) => {
                stage_log.push(StageRecord {
                    colour,
                    quota,
                    cross_position: None,
                    vertices_consumed: Vec::new(),
                    emitted: 0,
                });
                let reason = format!(
                    "no cross position on colours other than {colour} after {} candidates",
                    fail.candidates_tried
                );
                return Ok(fallback(config, stage, reason, stage_log));
            }
        };

        let cones: Vec<_> = cp.family(config).cones().iter().map(|c| c.to_cone()).collect();
        let fresh: Vec<usize> = (0..config.size()).filter(|v| !used[colour].contains(v)).collect();
        let found: Vec<Option<Transversal>> = fresh
            .par_iter()
            .map(|&v| {
                let target: IntDir = config.dir(colour, v).neg();
                let mask = cones.iter().position(|k| k.contains(&target))?;
                let mut choice = vec![0; config.size()];
                choice[colour] = v;
                for (j, pair) in cp.pairs.iter().enumerate() {
                    let bit = (mask >> (d - 1 - j)) & 1;
                    choice[pair.colour] = if bit == 0 { pair.z } else { pair.w };
                }
                Some(Transversal(choice))
            })
            .collect();

        let mut consumed = Vec::new();
        for (&v, t) in fresh.iter().zip(found) {
            if let Some(t) = t {
                consumed.push(v);
                simplices.push(t);
            }
        }
        let emitted = consumed.len();
        for p in &cp.pairs {
            used[p.colour].insert(p.z);
            used[p.colour].insert(p.w);
        }
        stage_log.push(StageRecord {
            colour,
            quota,
            cross_position: Some(cp),
            vertices_consumed: consumed,
            emitted,
        });
        if emitted < quota {
            let reason = format!("stage {stage} emitted {emitted} simplices, fewer than {quota}");
            return Ok(fallback(config, stage, reason, stage_log));
        }
    }

    let ws = WitnessSet {
        d,
        bound,
        simplices,
        stage_log,
        fallback: None,
    };
    if !verify_witness_set(config, &ws) {
        let stage = ws.stage_log.len().saturating_sub(1);
        return Ok(fallback(config, stage, "constructed set failed verification".into(), ws.stage_log));
    }
    Ok(ws)
}

fn fallback(config: &Configuration, stage: usize, reason: String, stage_log: Vec<StageRecord>) -> WitnessSet {
    let d = config.dim();
    WitnessSet {
        d,
        bound: theorem_bound(d),
        simplices: containing_transversals(config),
        stage_log,
        fallback: Some(Fallback { stage, reason }),
    }
}

/// Fresh check: right shapes, pairwise distinct, each simplex contains the
/// origin, and at least `⌊(d+2)²/4⌋` of them.
pub fn verify_witness_set(config: &Configuration, ws: &WitnessSet) -> bool {
    let d = config.dim();
    if ws.d != d || ws.bound != theorem_bound(d) || ws.simplices.len() < ws.bound {
        return false;
    }
    let shapes_ok = ws
        .simplices
        .iter()
        .all(|t| t.0.len() == config.size() && t.0.iter().all(|&i| i < config.size()));
    if !shapes_ok {
        return false;
    }
    let distinct: BTreeSet<&Transversal> = ws.simplices.iter().collect();
    if distinct.len() != ws.simplices.len() {
        return false;
    }
    ws.simplices.par_iter().all(|t| {
        let vertices: Vec<_> = t.vertices(config).into_iter().cloned().collect();
        simplex_contains_origin(&vertices).is_ok_and(|c| c.contains)
    })
}
