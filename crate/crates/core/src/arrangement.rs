//! Coverage of `R^d` by simplicial cones, decided on the central hyperplane
//! arrangement spanned by the cones' facets.
//!
//! Every cone is an intersection of closed halfspaces bounded by arrangement
//! hyperplanes, so membership is constant on each open cell. Checking one
//! exact interior witness per full-dimensional cell therefore settles
//! coverage of the whole space: the open cells are dense and the union of
//! closed cones is closed.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::depth::{complement_normal, Cone, ConeSpec};
use crate::exact::{strict_direction_across, IntDir, Point, Rational, Sign};

/// A hyperplane through the origin, stored by its primitive integer normal
/// with the first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CentralHyperplane {
    normal: Vec<BigInt>,
}

impl CentralHyperplane {
    /// Canonical hyperplane with the given normal; `None` for the zero vector.
    pub fn from_normal(normal: &IntDir) -> Option<Self> {
        let first = normal.coords().iter().find(|c| !c.is_zero())?;
        let flip = first.is_negative();
        let v: Vec<BigInt> = normal
            .coords()
            .iter()
            .map(|c| if flip { -c } else { c.clone() })
            .collect();
        let dir = IntDir::from_big(crate::exact::reduce_by_gcd(v));
        Some(CentralHyperplane {
            normal: dir.coords().to_vec(),
        })
    }

    pub fn from_point(normal: &Point) -> Option<Self> {
        Self::from_normal(&IntDir::from_point(normal))
    }

    pub fn normal(&self) -> Point {
        Point::from_ints(&self.normal)
    }

    pub(crate) fn dir(&self) -> IntDir {
        IntDir::from_big(self.normal.clone())
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }
}

impl Serialize for CentralHyperplane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.normal().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CentralHyperplane {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = Point::deserialize(d)?;
        CentralHyperplane::from_point(&p)
            .ok_or_else(|| serde::de::Error::custom("hyperplane normal must be nonzero"))
    }
}

/// Signs of a point against an ordered hyperplane list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    pub fn of(hyperplanes: &[CentralHyperplane], x: &Point) -> Self {
        let x = IntDir::from_point(x);
        SignVector(
            hyperplanes
                .iter()
                .map(|h| h.dir().dot_sign(&x))
                .collect(),
        )
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.0.iter().all(|&s| s != Sign::Zero)
    }

    pub fn negated(&self) -> Self {
        SignVector(self.0.iter().map(|&s| -s).collect())
    }
}

/// A full-dimensional cell with an exact interior point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub signs: SignVector,
    pub witness: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCover {
    pub signs: SignVector,
    pub cone: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageCertificate {
    pub covered: bool,
    pub hyperplanes: Vec<CentralHyperplane>,
    pub cells_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub uncovered_direction: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_cell_cone: Option<Vec<CellCover>>,
}

/// Deduplicated hyperplanes spanned by each `(d−1)`-subset of each cone's
/// generators, sorted by normal. Subsets of rank below `d−1` contribute
/// nothing.
pub fn facet_hyperplanes(cones: &[ConeSpec]) -> Vec<CentralHyperplane> {
    let mut set = BTreeSet::new();
    for cone in cones {
        let d = cone.dim();
        let gens: Vec<IntDir> = cone.generators.iter().map(IntDir::from_point).collect();
        for omit in 0..d {
            let others: Vec<&IntDir> = gens
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != omit)
                .map(|(_, g)| g)
                .collect();
            if let Some(h) = CentralHyperplane::from_normal(&complement_normal(&others, d)) {
                set.insert(h);
            }
        }
    }
    set.into_iter().collect()
}

/// Every full-dimensional cell of the arrangement, each exactly once, in
/// breadth-first wall-crossing order from an initial generic cell.
pub fn enumerate_cells(hyperplanes: &[CentralHyperplane]) -> Vec<Cell> {
    let Some(first) = hyperplanes.first() else {
        return Vec::new();
    };
    let d = first.dim();
    let normals: Vec<IntDir> = hyperplanes.iter().map(|h| h.dir()).collect();
    let start = generic_point(&normals, d);
    let start_signs: Vec<Sign> = normals.iter().map(|n| n.dot_sign(&start)).collect();

    let mut seen: HashMap<Vec<Sign>, bool> = HashMap::new();
    seen.insert(start_signs.clone(), true);
    let mut cells = vec![(start_signs, start)];
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);

    while !frontier.is_empty() {
        // Candidates from the whole frontier, deduplicated in order, then
        // resolved in parallel.
        let mut candidates: Vec<(Vec<Sign>, usize, usize)> = Vec::new();
        let mut queued: BTreeSet<Vec<Sign>> = BTreeSet::new();
        for &idx in &frontier {
            let (signs, _) = &cells[idx];
            for j in 0..normals.len() {
                let mut flipped = signs.clone();
                flipped[j] = -flipped[j];
                if seen.contains_key(&flipped) || queued.contains(&flipped) {
                    continue;
                }
                queued.insert(flipped.clone());
                candidates.push((flipped, idx, j));
            }
        }
        frontier.clear();
        let resolved: Vec<Option<IntDir>> = candidates
            .par_iter()
            .map(|(signs, from, j)| crossing_witness(&normals, signs, *j, &cells[*from].1))
            .collect();
        for ((signs, _, _), witness) in candidates.into_iter().zip(resolved) {
            seen.insert(signs.clone(), witness.is_some());
            if let Some(w) = witness {
                frontier.push_back(cells.len());
                cells.push((signs, w));
            }
        }
    }

    cells
        .into_iter()
        .map(|(signs, w)| Cell {
            signs: SignVector(signs),
            witness: w.to_point(),
        })
        .collect()
}

/// A point on the moment curve `(1, t, t², …)` avoiding every hyperplane.
fn generic_point(normals: &[IntDir], d: usize) -> IntDir {
    (1i64..)
        .map(|t| moment_point(d, t))
        .find(|x| normals.iter().all(|n| n.dot_sign(x) != Sign::Zero))
        .expect("finitely many roots")
}

fn moment_point(d: usize, t: i64) -> IntDir {
    let mut v = Vec::with_capacity(d);
    let mut p = BigInt::one();
    for _ in 0..d {
        v.push(p.clone());
        p *= t;
    }
    IntDir::from_big(v)
}

fn oriented(normals: &[IntDir], signs: &[Sign], skip: Option<usize>) -> Vec<IntDir> {
    normals
        .iter()
        .zip(signs)
        .enumerate()
        .filter(|&(i, _)| Some(i) != skip)
        .map(|(_, (n, s))| if *s == Sign::Negative { n.neg() } else { n.clone() })
        .collect()
}

/// Interior point of the cell `target`, which differs from the cell of `x`
/// only at hyperplane `j`. Such a cell exists iff hyperplane `j` carries a
/// facet of `x`'s cell, i.e. the other sign conditions are satisfiable on
/// the hyperplane itself.
fn crossing_witness(normals: &[IntDir], target: &[Sign], j: usize, x: &IntDir) -> Option<IntDir> {
    let rows = oriented(normals, target, Some(j));
    let new_row = if target[j] == Sign::Negative {
        normals[j].neg()
    } else {
        normals[j].clone()
    };
    strict_direction_across(&rows, &new_row, x)
}

/// Decides whether the cones cover `R^d`. Cones with dependent generators
/// earn no coverage credit but still contribute whatever facet hyperplanes
/// they span.
pub fn covers_space(cones: &[ConeSpec]) -> CoverageCertificate {
    let hyperplanes = facet_hyperplanes(cones);
    let built: Vec<Cone> = cones.iter().map(ConeSpec::to_cone).collect();
    let d = cones.first().map(ConeSpec::dim).unwrap_or(0);

    let rank = normal_rank(&hyperplanes);
    if d == 0 || rank < d {
        // Without d independent facet normals there is no full cone at all.
        let dir = avoiding_direction(&built, d.max(1), None);
        return CoverageCertificate {
            covered: false,
            hyperplanes,
            cells_checked: 0,
            uncovered_direction: Some(dir.to_point()),
            per_cell_cone: None,
        };
    }

    let cells = enumerate_cells(&hyperplanes);
    let assignments: Vec<Option<usize>> = cells
        .par_iter()
        .map(|cell| {
            let w = IntDir::from_point(&cell.witness);
            built.iter().position(|c| c.is_full() && c.contains(&w))
        })
        .collect();

    if let Some(k) = assignments.iter().position(Option::is_none) {
        let normals: Vec<IntDir> = hyperplanes.iter().map(|h| h.dir()).collect();
        let cell = &cells[k];
        let w = IntDir::from_point(&cell.witness);
        let dir = if built.iter().any(|c| c.contains(&w)) {
            // Lies in a lower-dimensional cone; move within the open cell.
            avoiding_direction(&built, d, Some((&normals, &cell.signs.0, &w)))
        } else {
            w
        };
        return CoverageCertificate {
            covered: false,
            hyperplanes,
            cells_checked: k + 1,
            uncovered_direction: Some(dir.to_point()),
            per_cell_cone: None,
        };
    }

    let per_cell = cells
        .iter()
        .zip(assignments)
        .map(|(cell, cone)| CellCover {
            signs: cell.signs.clone(),
            cone: cone.expect("all assigned"),
        })
        .collect::<Vec<_>>();
    CoverageCertificate {
        covered: true,
        hyperplanes,
        cells_checked: per_cell.len(),
        uncovered_direction: None,
        per_cell_cone: Some(per_cell),
    }
}

fn normal_rank(hyperplanes: &[CentralHyperplane]) -> usize {
    let rows: Vec<Vec<Rational>> = hyperplanes
        .iter()
        .map(|h| h.normal().coords().to_vec())
        .collect();
    rational_rank(rows)
}

pub(crate) fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &pivot;
                for k in c..cols {
                    let v = &rows[rank][k] * &f;
                    rows[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A direction in no cone. With `cell`, the direction also stays inside
/// that open cell: `K·w + m(t)` for the moment-curve point `m(t)` and `K`
/// large enough to keep every cell sign.
fn avoiding_direction(
    cones: &[Cone],
    d: usize,
    cell: Option<(&[IntDir], &[Sign], &IntDir)>,
) -> IntDir {
    for t in 1i64.. {
        let m = moment_point(d, t);
        let candidate = match cell {
            None => m,
            Some((normals, signs, w)) => {
                let mut k = BigInt::one();
                for (n, s) in normals.iter().zip(signs) {
                    let nw = n.dot(w);
                    let nm = n.dot(&m);
                    // need s·(K·nw + nm) > 0 with s·nw > 0
                    debug_assert_eq!(Sign::of_big(&nw), *s);
                    let bound = nm.abs() / nw.abs() + BigInt::one();
                    if bound > k {
                        k = bound;
                    }
                }
                IntDir::from_big(
                    w.coords()
                        .iter()
                        .zip(m.coords())
                        .map(|(a, b)| &k * a + b)
                        .collect(),
                )
            }
        };
        if !candidate.is_zero() && cones.iter().all(|c| !c.contains(&candidate)) {
            return candidate;
        }
    }
    unreachable!("lower-dimensional cones meet the moment curve finitely often")
}

/// Independent re-check of a certificate against the cones: the hyperplane
/// list is recomputed, and for `covered` every cell of a fresh enumeration
/// must be listed and its sign vector must satisfy the facet constraints of
/// its assigned cone. For `!covered` the direction must lie in no cone.
pub fn verify_certificate(cones: &[ConeSpec], cert: &CoverageCertificate) -> bool {
    if facet_hyperplanes(cones) != cert.hyperplanes {
        return false;
    }
    let built: Vec<Cone> = cones.iter().map(ConeSpec::to_cone).collect();
    if !cert.covered {
        return match &cert.uncovered_direction {
            Some(p) => {
                let x = IntDir::from_point(p);
                !x.is_zero() && built.iter().all(|c| !c.contains(&x))
            }
            None => false,
        };
    }
    let Some(map) = &cert.per_cell_cone else {
        return false;
    };
    let fresh: BTreeSet<SignVector> = enumerate_cells(&cert.hyperplanes)
        .into_iter()
        .map(|c| c.signs)
        .collect();
    let listed: BTreeSet<SignVector> = map.iter().map(|c| c.signs.clone()).collect();
    if fresh != listed || map.len() != cert.cells_checked {
        return false;
    }
    map.iter().all(|entry| {
        let Some(cone) = built.get(entry.cone) else {
            return false;
        };
        let Some(normals) = cone.normals() else {
            return false;
        };
        normals.iter().all(|n| {
            let Some(h) = CentralHyperplane::from_normal(n) else {
                return false;
            };
            let Ok(idx) = cert.hyperplanes.binary_search(&h) else {
                return false;
            };
            // The canonical normal equals ±n; the cell must be on n's side.
            let same = h.dir().dot_sign(n) == Sign::Positive;
            let s = entry.signs.0[idx];
            if same {
                s == Sign::Positive
            } else {
                s == Sign::Negative
            }
        })
    })
}

/// Bound on sampled coordinates used by the refuter.
const SAMPLE_RANGE: i64 = 1 << 16;

/// Samples seeded integer directions and returns the first one that lies in
/// no cone. Never asserts coverage.
pub fn monte_carlo_refuter(cones: &[ConeSpec], samples: usize, seed: u64) -> Option<Point> {
    let d = cones.first()?.dim();
    let built: Vec<Cone> = cones.iter().map(ConeSpec::to_cone).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Facet normals that fit in i64 allow an allocation-free loop.
    let small: Option<Vec<Vec<&[i64]>>> = built
        .iter()
        .filter(|c| c.is_full())
        .map(|c| c.normals()?.iter().map(|n| n.small()).collect())
        .collect();
    let degenerate: Vec<&Cone> = built.iter().filter(|c| !c.is_full()).collect();
    if let Some(small) = small {
        let mut x = vec![0i64; d];
        for _ in 0..samples {
            x.iter_mut().for_each(|c| *c = rng.random_range(-SAMPLE_RANGE..=SAMPLE_RANGE));
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            let inside = |normals: &Vec<&[i64]>| {
                normals.iter().all(|n| n.iter().zip(&x).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>() >= 0)
            };
            if small.iter().any(inside) {
                continue;
            }
            let dir = IntDir::from_big(x.iter().map(|&c| BigInt::from(c)).collect());
            if !degenerate.iter().any(|c| c.contains(&dir)) {
                return Some(dir.to_point());
            }
        }
        return None;
    }
    for _ in 0..samples {
        let v: Vec<BigInt> = (0..d)
            .map(|_| BigInt::from(rng.random_range(-SAMPLE_RANGE..=SAMPLE_RANGE)))
            .collect();
        let x = IntDir::from_big(v);
        if x.is_zero() {
            continue;
        }
        if built.iter().all(|c| !c.contains(&x)) {
            return Some(x.to_point());
        }
    }
    None
}
