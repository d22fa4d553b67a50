//! Closed-simplex containment, cone membership, colourful simplicial depth
//! and D-depth, all relative to the origin.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{transversal_count, Configuration, Transversal};
use crate::error::{Error, Result};
use crate::exact::{
    feasible_direction, int_det_sign, int_det_value, solve_square, IntDir,
    Point, Rational, Relation, Sign,
};

/// Outcome of a closed-simplex containment test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Containment {
    pub contains: bool,
    /// Barycentric coefficients of the origin when contained: unique when the
    /// vertices are affinely independent, some valid choice otherwise.
    pub coefficients: Option<Vec<Rational>>,
}

/// Signs of the last-row cofactors of `[v_0 … v_d ; 1 … 1]`.
///
/// `λ_j = C_j / det`, and `det = Σ_j C_j`, so the origin lies in the closed
/// simplex iff the nonzero cofactors share one sign. If every cofactor is zero
/// the vertices span a hyperplane through the origin and need the
/// lower-dimensional test. Each sign is invariant under positive rescaling of
/// individual vertices.
pub(crate) fn lifted_cofactor_signs(dirs: &[&IntDir]) -> Vec<Sign> {
    let d = dirs.len() - 1;
    (0..=d)
        .map(|j| {
            let minor: Vec<&IntDir> = dirs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, v)| *v)
                .collect();
            let s = int_det_sign(&minor);
            if (d + j) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect()
}

pub(crate) fn simplex_contains_origin_dirs(dirs: &[&IntDir]) -> bool {
    let signs = lifted_cofactor_signs(dirs);
    let pos = signs.contains(&Sign::Positive);
    let neg = signs.contains(&Sign::Negative);
    match (pos, neg) {
        (true, true) => false,
        (true, false) | (false, true) => true,
        (false, false) => degenerate_hull_weights(dirs).is_some(),
    }
}

/// Nonnegative weights, not all zero, with `Σ λ_j v_j = 0`.
fn degenerate_hull_weights(dirs: &[&IntDir]) -> Option<IntDir> {
    let n = dirs.len();
    let d = dirs[0].dim();
    let mut rows: Vec<(IntDir, Relation)> = Vec::with_capacity(n + d + 1);
    for k in 0..d {
        rows.push((
            IntDir::from_big(dirs.iter().map(|v| v.coords()[k].clone()).collect()),
            Relation::Zero,
        ));
    }
    for j in 0..n {
        rows.push((unit_dir(n, j), Relation::NonNegative));
    }
    rows.push((
        IntDir::from_big(vec![BigInt::one(); n]),
        Relation::Positive,
    ));
    let refs: Vec<(&IntDir, Relation)> = rows.iter().map(|(v, r)| (v, *r)).collect();
    feasible_direction(n, &refs)
}

fn unit_dir(n: usize, j: usize) -> IntDir {
    let mut v = vec![BigInt::zero(); n];
    v[j] = BigInt::one();
    IntDir::from_big(v)
}

/// Tests whether the origin lies in the closed convex hull of `d+1` points.
pub fn simplex_contains_origin(vertices: &[Point]) -> Result<Containment> {
    let Some(first) = vertices.first() else {
        return Err(Error::Input("simplex needs vertices".into()));
    };
    let d = first.dim();
    if vertices.len() != d + 1 {
        return Err(Error::Dimension {
            expected: d + 1,
            found: vertices.len(),
        });
    }
    for v in vertices {
        v.expect_dim(d)?;
    }
    let dirs: Vec<IntDir> = vertices.iter().map(IntDir::from_point).collect();
    let refs: Vec<&IntDir> = dirs.iter().collect();
    if !simplex_contains_origin_dirs(&refs) {
        return Ok(Containment {
            contains: false,
            coefficients: None,
        });
    }
    let refs: Vec<&Point> = vertices.iter().collect();
    Ok(Containment {
        contains: true,
        coefficients: Some(barycentric_of_origin(&refs)),
    })
}

/// Barycentric coefficients of the origin, assuming it is contained.
fn barycentric_of_origin(vertices: &[&Point]) -> Vec<Rational> {
    let d = vertices[0].dim();
    let lifted: Vec<Point> = vertices
        .iter()
        .map(|v| {
            let mut c = v.coords().to_vec();
            c.push(Rational::one());
            Point::new(c)
        })
        .collect();
    let mut rhs = vec![Rational::zero(); d + 1];
    rhs[d] = Rational::one();
    if let Some(coeffs) = solve_square(&lifted, &Point::new(rhs)).expect("square system") {
        return coeffs;
    }
    // Affinely dependent: weights for the actual points, then normalized.
    let dirs: Vec<IntDir> = vertices.iter().map(|v| IntDir::from_point(v)).collect();
    let scales: Vec<Rational> = vertices
        .iter()
        .zip(&dirs)
        .map(|(v, dir)| scale_between(v, dir))
        .collect();
    let refs: Vec<&IntDir> = dirs.iter().collect();
    let weights = degenerate_hull_weights(&refs).expect("contained origin has weights");
    // dir_j = s_j · v_j, so Σ w_j dir_j = Σ (w_j s_j) v_j.
    let raw: Vec<Rational> = weights
        .coords()
        .iter()
        .zip(&scales)
        .map(|(w, s)| Rational::from_integer(w.clone()) * s)
        .collect();
    let total: Rational = raw.iter().sum();
    raw.into_iter().map(|w| w / &total).collect()
}

/// The positive factor `s` with `dir = s · p` (1 for the zero vector).
fn scale_between(p: &Point, dir: &IntDir) -> Rational {
    p.coords()
        .iter()
        .zip(dir.coords())
        .find(|(c, _)| !c.is_zero())
        .map(|(c, k)| Rational::from_integer(k.clone()) / c)
        .unwrap_or_else(Rational::one)
}

/// A simplicial cone `cone(g_1, …, g_d)` with its inward facet normals
/// precomputed, so membership of a direction is `d` integer dot products.
#[derive(Clone, Debug)]
pub(crate) struct Cone {
    gens: Vec<IntDir>,
    /// Inward normals `n_i` with `n_i · g_i > 0` and `n_i · g_j = 0` for
    /// `j ≠ i`; present only when the generators are independent.
    normals: Option<Vec<IntDir>>,
    /// For dependent generators, a nonzero normal of a hyperplane holding
    /// them all: directions off that hyperplane are rejected without an LP.
    span_normal: Option<IntDir>,
}

impl Cone {
    pub(crate) fn new(gens: Vec<IntDir>) -> Self {
        let refs: Vec<&IntDir> = gens.iter().collect();
        let normals = (int_det_sign(&refs) != Sign::Zero).then(|| {
            (0..gens.len())
                .map(|i| {
                    let others: Vec<&IntDir> = refs
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, g)| *g)
                        .collect();
                    let n = complement_normal(&others, gens.len());
                    if n.dot_sign(&gens[i]) == Sign::Negative {
                        n.neg()
                    } else {
                        n
                    }
                })
                .collect()
        });
        let span_normal = if normals.is_none() { hyperplane_through(&gens) } else { None };
        Cone {
            gens,
            normals,
            span_normal,
        }
    }

    pub(crate) fn normals(&self) -> Option<&[IntDir]> {
        self.normals.as_deref()
    }

    pub(crate) fn is_full(&self) -> bool {
        self.normals.is_some()
    }

    pub(crate) fn contains(&self, x: &IntDir) -> bool {
        match &self.normals {
            Some(ns) => ns.iter().all(|n| n.dot_sign(x) != Sign::Negative),
            None => {
                if let Some(n) = &self.span_normal {
                    if n.dot_sign(x) != Sign::Zero {
                        return false;
                    }
                }
                degenerate_cone_contains(&self.gens, x)
            }
        }
    }
}

/// Normal of the span of `vectors` (`d−1` vectors in `R^d`): the vector of
/// signed maximal minors, so that `n · x = det[x, vectors…]`. Zero when the
/// vectors are dependent.
pub(crate) fn complement_normal(vectors: &[&IntDir], d: usize) -> IntDir {
    let coords: Vec<BigInt> = (0..d)
        .map(|k| {
            let minor_rows: Vec<IntDir> = vectors
                .iter()
                .map(|v| {
                    IntDir::from_big(
                        v.coords()
                            .iter()
                            .enumerate()
                            .filter(|&(r, _)| r != k)
                            .map(|(_, c)| c.clone())
                            .collect(),
                    )
                })
                .collect();
            let refs: Vec<&IntDir> = minor_rows.iter().collect();
            let m = int_det_value(&refs);
            if k % 2 == 1 {
                -m
            } else {
                m
            }
        })
        .collect();
    IntDir::from_big(coords)
}

/// A nonzero normal orthogonal to every vector of a rank-deficient family,
/// from `d−1` of the vectors and coordinate axes.
fn hyperplane_through(gens: &[IntDir]) -> Option<IntDir> {
    let d = gens.first()?.dim();
    let axes: Vec<IntDir> = (0..d).map(|k| unit_dir(d, k)).collect();
    let pool: Vec<&IntDir> = gens.iter().chain(&axes).collect();
    pool.iter()
        .copied()
        .combinations(d - 1)
        .map(|basis| complement_normal(&basis, d))
        .find(|n| !n.is_zero() && gens.iter().all(|g| n.dot_sign(g) == Sign::Zero))
}

fn degenerate_cone_contains(gens: &[IntDir], x: &IntDir) -> bool {
    if x.is_zero() {
        return true;
    }
    let d = x.dim();
    let n = gens.len() + 1;
    let mut rows: Vec<(IntDir, Relation)> = Vec::with_capacity(d + n);
    for k in 0..d {
        let mut row: Vec<BigInt> = gens.iter().map(|g| g.coords()[k].clone()).collect();
        row.push(-x.coords()[k].clone());
        rows.push((IntDir::from_big(row), Relation::Zero));
    }
    for j in 0..gens.len() {
        rows.push((unit_dir(n, j), Relation::NonNegative));
    }
    rows.push((unit_dir(n, gens.len()), Relation::Positive));
    let refs: Vec<(&IntDir, Relation)> = rows.iter().map(|(v, r)| (v, *r)).collect();
    feasible_direction(n, &refs).is_some()
}

/// `d` cone generators, each labelled with its colour (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub generators: Vec<Point>,
    pub colours: Vec<usize>,
}

impl ConeSpec {
    pub fn new(generators: Vec<Point>, colours: Vec<usize>) -> Result<Self> {
        let d = generators.len();
        if colours.len() != d {
            return Err(Error::Dimension {
                expected: d,
                found: colours.len(),
            });
        }
        for g in &generators {
            g.expect_dim(d)?;
            if g.is_zero() {
                return Err(Error::Input("cone generator must be nonzero".into()));
            }
        }
        Ok(ConeSpec { generators, colours })
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub(crate) fn to_cone(&self) -> Cone {
        Cone::new(self.generators.iter().map(IntDir::from_point).collect())
    }
}

/// Whether `x` is a nonnegative combination of the cone's generators.
pub fn cone_contains(cone: &ConeSpec, x: &Point) -> Result<bool> {
    x.expect_dim(cone.dim())?;
    Ok(cone.to_cone().contains(&IntDir::from_point(x)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthWitness {
    pub choice: Transversal,
    #[serde(with = "crate::exact::serde_rationals")]
    pub coeffs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub depth: usize,
    pub witnesses: Vec<DepthWitness>,
}

/// Whether the closed colourful simplex of `t` contains the origin.
pub fn transversal_contains_origin(config: &Configuration, t: &Transversal) -> bool {
    simplex_contains_origin_dirs(&t.dirs(config))
}

/// Transversals whose closed simplex contains the origin, in lexicographic
/// order. Ranks are checked in parallel; the collected order is the rank
/// order regardless of scheduling.
pub fn containing_transversals(config: &Configuration) -> Vec<Transversal> {
    let size = config.size();
    (0..transversal_count(config))
        .into_par_iter()
        .map(|rank| Transversal::from_rank(size, rank))
        .filter(|t| transversal_contains_origin(config, t))
        .collect()
}

pub fn colourful_depth_count(config: &Configuration) -> usize {
    let size = config.size();
    (0..transversal_count(config))
        .into_par_iter()
        .filter(|&rank| transversal_contains_origin(config, &Transversal::from_rank(size, rank)))
        .count()
}

/// Colourful simplicial depth of the origin with one witness per simplex.
pub fn colourful_depth(config: &Configuration) -> DepthReport {
    let witnesses: Vec<DepthWitness> = containing_transversals(config)
        .into_par_iter()
        .map(|t| {
            let coeffs = barycentric_of_origin(&t.vertices(config));
            DepthWitness { choice: t, coeffs }
        })
        .collect();
    DepthReport {
        depth: witnesses.len(),
        witnesses,
    }
}

/// Re-checks a witness from scratch with rational arithmetic: coefficients
/// nonnegative, summing to one, combining the vertices to the origin.
pub fn witness_is_sound(config: &Configuration, w: &DepthWitness) -> bool {
    let size = config.size();
    if w.choice.0.len() != size || w.coeffs.len() != size || w.choice.0.iter().any(|&i| i >= size)
    {
        return false;
    }
    if w.coeffs.iter().any(|c| *c < Rational::zero()) {
        return false;
    }
    if w.coeffs.iter().sum::<Rational>() != Rational::one() {
        return false;
    }
    let mut acc = Point::zero(config.dim());
    for (p, c) in w.choice.vertices(config).into_iter().zip(&w.coeffs) {
        acc = acc.add(&p.scale(c));
    }
    acc.is_zero()
}

/// A set `D` of `d` distinct colours (0-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColourSet(Vec<usize>);

impl ColourSet {
    pub fn new(dim: usize, mut colours: Vec<usize>) -> Result<Self> {
        colours.sort_unstable();
        colours.dedup();
        if colours.len() != dim {
            return Err(Error::Input(format!(
                "colour set must contain {dim} distinct colours"
            )));
        }
        if let Some(&c) = colours.iter().find(|&&c| c > dim) {
            return Err(Error::Input(format!("colour {c} out of range 0..={dim}")));
        }
        Ok(ColourSet(colours))
    }

    /// All colours except `omitted`.
    pub fn omitting(dim: usize, omitted: usize) -> Result<Self> {
        if omitted > dim {
            return Err(Error::Input(format!("colour {omitted} out of range 0..={dim}")));
        }
        Ok(ColourSet((0..=dim).filter(|&c| c != omitted).collect()))
    }

    pub fn colours(&self) -> &[usize] {
        &self.0
    }

    pub fn omitted(&self) -> usize {
        (0..=self.0.len())
            .find(|c| !self.0.contains(c))
            .expect("d of d+1 colours")
    }
}

/// The `(d+1)^d` cones with one generator from each colour of `D`, in
/// lexicographic order of point choices.
#[derive(Clone, Debug)]
pub struct DCones {
    colours: ColourSet,
    choices: Vec<Vec<usize>>,
    cones: Vec<Cone>,
}

impl DCones {
    pub fn new(config: &Configuration, colours: &ColourSet) -> Self {
        let size = config.size();
        let d = config.dim();
        let count = size.pow(d as u32);
        let choices: Vec<Vec<usize>> = (0..count)
            .map(|mut rank| {
                let mut c = vec![0; d];
                for slot in c.iter_mut().rev() {
                    *slot = rank % size;
                    rank /= size;
                }
                c
            })
            .collect();
        let cones = choices
            .par_iter()
            .map(|choice| {
                Cone::new(
                    colours
                        .colours()
                        .iter()
                        .zip(choice)
                        .map(|(&c, &i)| config.dir(c, i).clone())
                        .collect(),
                )
            })
            .collect();
        DCones {
            colours: colours.clone(),
            choices,
            cones,
        }
    }

    pub fn colours(&self) -> &ColourSet {
        &self.colours
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    /// Point indices of cone `k`, one per colour of `D` in order.
    pub fn choice(&self, k: usize) -> &[usize] {
        &self.choices[k]
    }

    #[cfg(test)]
    pub(crate) fn cone(&self, k: usize) -> &Cone {
        &self.cones[k]
    }

    /// Indices of cones containing `x`, ascending.
    pub(crate) fn containing(&self, x: &IntDir) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&k| self.cones[k].contains(x))
            .collect()
    }

    pub(crate) fn depth_of(&self, x: &IntDir) -> usize {
        self.cones.iter().filter(|c| c.contains(x)).count()
    }
}

/// Number of `D`-coloured cones containing the direction `x`.
pub fn d_depth(config: &Configuration, colours: &ColourSet, x: &Point) -> Result<usize> {
    x.expect_dim(config.dim())?;
    if colours.colours().len() != config.dim() {
        return Err(Error::Input("colour set must have d colours".into()));
    }
    if x.is_zero() {
        return Err(Error::Input(
            "D-depth is a directional quantity; the origin is rejected".into(),
        ));
    }
    Ok(DCones::new(config, colours).depth_of(&IntDir::from_point(x)))
}

/// Tests the colourful simplex of `t` through its antipodal form: whether
/// the negation of `t`'s colour-`colour` point lies in the cone spanned by
/// the other points of `t`.
pub fn antipodal_check(config: &Configuration, t: &Transversal, colour: usize) -> bool {
    let gens: Vec<IntDir> = t
        .0
        .iter()
        .enumerate()
        .filter(|&(c, _)| c != colour)
        .map(|(c, &i)| config.dir(c, i).clone())
        .collect();
    let apex = config.dir(colour, t.0[colour]).neg();
    Cone::new(gens).contains(&apex)
}
