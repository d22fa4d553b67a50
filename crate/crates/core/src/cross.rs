//! Deformed cross position: two points in each of `d` colours whose `2^d`
//! colourful simplicial cones cover `R^d`, and its construction inside a
//! configuration from a direction of low D-depth.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{covers_space, enumerate_cells, facet_hyperplanes, CoverageCertificate};
use crate::config::{Configuration, RawDoc};
use crate::depth::{ColourSet, ConeSpec, DCones};
use crate::error::{Error, Result};
use crate::exact::{IntDir, Point};
use crate::search::sample_point;

/// Two points per colour for `d` colours; `pairs[j]` has colour `colours[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFamily {
    pub d: usize,
    pub colours: Vec<usize>,
    pub pairs: Vec<[Point; 2]>,
}

impl PairFamily {
    pub fn new(pairs: Vec<[Point; 2]>) -> Result<Self> {
        let d = pairs.len();
        if d == 0 {
            return Err(Error::Input("pair family needs at least one colour".into()));
        }
        for pair in &pairs {
            for p in pair {
                p.expect_dim(d)?;
                if p.is_zero() {
                    return Err(Error::Input("cross-position points must be nonzero".into()));
                }
            }
        }
        Ok(PairFamily {
            d,
            colours: (0..d).collect(),
            pairs,
        })
    }

    /// The `2^d` colourful cones. Cone `mask` takes, for the colour at
    /// position `j`, member `(mask >> (d−1−j)) & 1` of its pair, so the
    /// all-zero mask is the cone of first members.
    pub fn cones(&self) -> Vec<ConeSpec> {
        let d = self.d;
        (0..1usize << d)
            .map(|mask| ConeSpec {
                generators: (0..d)
                    .map(|j| self.pairs[j][(mask >> (d - 1 - j)) & 1].clone())
                    .collect(),
                colours: self.colours.clone(),
            })
            .collect()
    }
}

/// Reads a pairs document: `{"d": n, "colours": [[p, p], …]}` with `d`
/// classes of two points each.
pub fn parse_pairs(text: &str) -> Result<PairFamily> {
    let raw = RawDoc::from_json(text)?;
    let d = raw.d;
    let classes = raw.into_classes(d, 2)?;
    PairFamily::new(
        classes
            .into_iter()
            .map(|mut c| {
                let second = c.pop().expect("two points");
                let first = c.pop().expect("two points");
                [first, second]
            })
            .collect(),
    )
}

/// Largest dimension decided by default.
pub const MAX_COVERAGE_DIM: usize = 4;

/// Largest dimension decided at all, on explicit request. At `d = 5` the
/// facet arrangement has up to 80 hyperplanes and about 3·10^6 cells, so a
/// decision can take hours.
pub const MAX_COVERAGE_DIM_ON_REQUEST: usize = 5;

/// Builds the `2^d` colourful cones and decides whether they cover space,
/// for `d ≤ MAX_COVERAGE_DIM`.
pub fn is_deformed_cross_position(pairs: &[[Point; 2]]) -> Result<CoverageCertificate> {
    is_deformed_cross_position_with(pairs, false)
}

/// As [`is_deformed_cross_position`]; `allow_d5` also admits `d = 5`.
pub fn is_deformed_cross_position_with(pairs: &[[Point; 2]], allow_d5: bool) -> Result<CoverageCertificate> {
    let family = PairFamily::new(pairs.to_vec())?;
    check_coverage_dim(family.d, allow_d5)?;
    Ok(covers_space(&family.cones()))
}

fn check_coverage_dim(d: usize, allow_d5: bool) -> Result<()> {
    let limit = if allow_d5 { MAX_COVERAGE_DIM_ON_REQUEST } else { MAX_COVERAGE_DIM };
    if d > limit {
        return Err(Error::Precondition(format!(
            "exact coverage is limited to d <= {limit} (got d = {d})"
        )));
    }
    Ok(())
}

/// One colour's contribution: `z` from a cone containing the chosen
/// direction, `w` from no such cone (0-based point indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossPair {
    pub colour: usize,
    pub z: usize,
    pub w: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    Antipode,
    CellWitness,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossPosition {
    pub colours: ColourSet,
    pub pairs: Vec<CrossPair>,
    /// The low-depth direction the pairs were built from.
    pub direction: Point,
    pub direction_d_depth: usize,
    pub source: CandidateSource,
    pub certificate: CoverageCertificate,
}

impl CrossPosition {
    pub fn family(&self, config: &Configuration) -> PairFamily {
        PairFamily {
            d: config.dim(),
            colours: self.pairs.iter().map(|p| p.colour).collect(),
            pairs: self
                .pairs
                .iter()
                .map(|p| {
                    [
                        config.point(p.colour, p.z).clone(),
                        config.point(p.colour, p.w).clone(),
                    ]
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossFailure {
    pub colours: ColourSet,
    /// Smallest D-depth seen over all candidate directions.
    pub min_observed_d_depth: Option<usize>,
    pub candidates_tried: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CrossOutcome {
    Found(CrossPosition),
    NotFound(CrossFailure),
}

/// Where candidate directions come from. Antipodes of configuration points
/// are always tried first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Also try one witness per cell of the D-cone facet arrangement, for
    /// `d ≤ max_exhaustive_dim`. Since D-depth is constant on those cells,
    /// this makes the search for a low-depth direction exhaustive.
    pub exhaustive_cells: bool,
    pub max_exhaustive_dim: usize,
    pub random_directions: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            exhaustive_cells: true,
            max_exhaustive_dim: 3,
            random_directions: 256,
        }
    }
}

impl SearchBudget {
    /// Antipodes and random directions only.
    pub fn heuristic(random_directions: usize) -> Self {
        SearchBudget {
            exhaustive_cells: false,
            max_exhaustive_dim: 0,
            random_directions,
        }
    }
}

struct Candidate {
    source: CandidateSource,
    dir: IntDir,
}

/// Looks for a subset of `config` in deformed cross position on the colours
/// `D`: a direction `x` lying in between one and `d−1` D-cones, then per
/// colour `z_i` from the first cone containing `x` and `w_i` (lowest index)
/// from no cone containing `x`. The resulting family is kept only if its
/// coverage certificate verifies.
pub fn find_cross_position(
    config: &Configuration,
    colours: &ColourSet,
    budget: &SearchBudget,
    seed: u64,
) -> Result<CrossOutcome> {
    let d = config.dim();
    if colours.colours().len() != d || colours.colours().iter().any(|&c| c > d) {
        return Err(Error::Input("colour set must hold d colours of the configuration".into()));
    }
    if !config.origin_in_interior() {
        return Err(Error::Precondition(
            "origin must lie in the interior of every colour's hull".into(),
        ));
    }
    check_coverage_dim(d, false)?;
    let cones = DCones::new(config, colours);
    let mut tried = 0;
    let mut min_depth: Option<usize> = None;

    let antipodes: Vec<Candidate> = (0..config.size())
        .flat_map(|c| (0..config.size()).map(move |i| (c, i)))
        .map(|(c, i)| Candidate {
            source: CandidateSource::Antipode,
            dir: config.dir(c, i).neg(),
        })
        .filter(|c| !c.dir.is_zero())
        .collect();
    if let Some(found) = try_batch(config, &cones, &antipodes, &mut tried, &mut min_depth) {
        return Ok(CrossOutcome::Found(found));
    }

    if budget.exhaustive_cells && d <= budget.max_exhaustive_dim {
        let specs: Vec<ConeSpec> = (0..cones.len())
            .map(|k| ConeSpec {
                generators: colours
                    .colours()
                    .iter()
                    .zip(cones.choice(k))
                    .map(|(&c, &i)| config.point(c, i).clone())
                    .collect(),
                colours: colours.colours().to_vec(),
            })
            .collect();
        let cells: Vec<Candidate> = enumerate_cells(&facet_hyperplanes(&specs))
            .into_iter()
            .map(|cell| Candidate {
                source: CandidateSource::CellWitness,
                dir: IntDir::from_point(&cell.witness),
            })
            .collect();
        if let Some(found) = try_batch(config, &cones, &cells, &mut tried, &mut min_depth) {
            return Ok(CrossOutcome::Found(found));
        }
    }

    if budget.random_directions > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random: Vec<Candidate> = (0..budget.random_directions)
            .map(|_| Candidate {
                source: CandidateSource::Random,
                dir: IntDir::from_point(&sample_point(&mut rng, d)),
            })
            .filter(|c| !c.dir.is_zero())
            .collect();
        if let Some(found) = try_batch(config, &cones, &random, &mut tried, &mut min_depth) {
            return Ok(CrossOutcome::Found(found));
        }
    }

    Ok(CrossOutcome::NotFound(CrossFailure {
        colours: colours.clone(),
        min_observed_d_depth: min_depth,
        candidates_tried: tried,
    }))
}

/// D-depths of the batch are computed in parallel; construction is then
/// attempted in batch order, so the result does not depend on scheduling.
fn try_batch(
    config: &Configuration,
    cones: &DCones,
    batch: &[Candidate],
    tried: &mut usize,
    min_depth: &mut Option<usize>,
) -> Option<CrossPosition> {
    let d = config.dim();
    let containing: Vec<Vec<usize>> = batch.par_iter().map(|c| cones.containing(&c.dir)).collect();
    for (cand, inside) in batch.iter().zip(containing) {
        *tried += 1;
        let depth = inside.len();
        *min_depth = Some(min_depth.map_or(depth, |m| m.min(depth)));
        if depth == 0 || depth > d - 1 {
            continue;
        }
        if let Some(found) = build_from_direction(config, cones, cand, &inside) {
            return Some(found);
        }
    }
    None
}

fn build_from_direction(
    config: &Configuration,
    cones: &DCones,
    cand: &Candidate,
    inside: &[usize],
) -> Option<CrossPosition> {
    let d = config.dim();
    let colours = cones.colours().colours();
    let z_choice = cones.choice(inside[0]);
    let pairs: Vec<CrossPair> = colours
        .iter()
        .enumerate()
        .map(|(j, &colour)| {
            let used: BTreeSet<usize> = inside.iter().map(|&k| cones.choice(k)[j]).collect();
            let w = (0..config.size()).find(|i| !used.contains(i))?;
            Some(CrossPair {
                colour,
                z: z_choice[j],
                w,
            })
        })
        .collect::<Option<_>>()?;
    let family = PairFamily {
        d,
        colours: colours.to_vec(),
        pairs: pairs
            .iter()
            .map(|p| {
                [
                    config.point(p.colour, p.z).clone(),
                    config.point(p.colour, p.w).clone(),
                ]
            })
            .collect(),
    };
    let certificate = covers_space(&family.cones());
    if !certificate.covered {
        return None;
    }
    Some(CrossPosition {
        colours: cones.colours().clone(),
        pairs,
        direction: cand.dir.to_point(),
        direction_d_depth: inside.len(),
        source: cand.source,
        certificate,
    })
}

/// Re-checks a returned cross position against its configuration.
pub fn verify_cross_position(config: &Configuration, cp: &CrossPosition) -> bool {
    let d = config.dim();
    if cp.pairs.len() != d || cp.colours.colours().len() != d {
        return false;
    }
    let shape_ok = cp.pairs.iter().zip(cp.colours.colours()).all(|(p, &c)| {
        p.colour == c && p.z != p.w && p.z < config.size() && p.w < config.size()
    });
    if !shape_ok {
        return false;
    }
    let family = cp.family(config);
    let cones = family.cones();
    cp.certificate.covered && crate::arrangement::verify_certificate(&cones, &cp.certificate)
}
