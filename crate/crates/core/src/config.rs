//! Colourful configurations: `d+1` colour classes of `d+1` points in `R^d`,
//! with the query point fixed at the origin.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::depth::{lifted_cofactor_signs, simplex_contains_origin_dirs};
use crate::error::{Error, Result};
use crate::exact::{int_det_sign, parse_rational, IntDir, Point, Sign};

/// Reference to one configuration point: `(colour, index)`, both 0-based.
pub type PointRef = (usize, usize);

#[derive(Clone, Debug)]
pub struct Configuration {
    dim: usize,
    colours: Vec<Vec<Point>>,
    dirs: Vec<Vec<IntDir>>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.colours == other.colours
    }
}

impl Eq for Configuration {}

/// On-disk form shared by every command.
#[derive(Serialize, Deserialize)]
struct ConfigurationDoc {
    d: usize,
    colours: Vec<Vec<Point>>,
}

#[derive(Deserialize)]
pub(crate) struct RawDoc {
    pub d: usize,
    pub colours: Vec<Vec<Vec<String>>>,
}

impl RawDoc {
    pub(crate) fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let message = e.to_string();
            let location = format!("line {} column {}", e.line(), e.column());
            let message = message
                .strip_suffix(&format!(" at {location}"))
                .unwrap_or(&message)
                .to_string();
            Error::parse(location, message)
        })
    }

    /// Checks the class/point counts and parses every coordinate.
    pub(crate) fn into_classes(self, classes: usize, per_class: usize) -> Result<Vec<Vec<Point>>> {
        let d = self.d;
        if d == 0 {
            return Err(Error::Input("dimension d must be positive".into()));
        }
        if self.colours.len() != classes {
            return Err(Error::Count {
                location: "colours".into(),
                expected: classes,
                found: self.colours.len(),
            });
        }
        self.colours
            .into_iter()
            .enumerate()
            .map(|(c, class)| {
                if class.len() != per_class {
                    return Err(Error::Count {
                        location: format!("colours[{c}]"),
                        expected: per_class,
                        found: class.len(),
                    });
                }
                class
                    .into_iter()
                    .enumerate()
                    .map(|(i, coords)| {
                        if coords.len() != d {
                            return Err(Error::Count {
                                location: format!("colours[{c}][{i}]"),
                                expected: d,
                                found: coords.len(),
                            });
                        }
                        coords
                            .iter()
                            .enumerate()
                            .map(|(k, s)| {
                                parse_rational(s).map_err(|e| {
                                    Error::parse(format!("colours[{c}][{i}][{k}]"), e.to_string())
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                            .map(Point::new)
                    })
                    .collect()
            })
            .collect()
    }
}

impl Configuration {
    pub fn new(dim: usize, colours: Vec<Vec<Point>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("dimension d must be positive".into()));
        }
        if colours.len() != dim + 1 {
            return Err(Error::Count {
                location: "colours".into(),
                expected: dim + 1,
                found: colours.len(),
            });
        }
        for (c, class) in colours.iter().enumerate() {
            if class.len() != dim + 1 {
                return Err(Error::Count {
                    location: format!("colours[{c}]"),
                    expected: dim + 1,
                    found: class.len(),
                });
            }
            for p in class {
                p.expect_dim(dim)?;
            }
        }
        let dirs = colours
            .iter()
            .map(|class| class.iter().map(IntDir::from_point).collect())
            .collect();
        Ok(Configuration { dim, colours, dirs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of colours, and of points per colour: `d+1`.
    pub fn size(&self) -> usize {
        self.dim + 1
    }

    pub fn colours(&self) -> &[Vec<Point>] {
        &self.colours
    }

    pub fn point(&self, colour: usize, index: usize) -> &Point {
        &self.colours[colour][index]
    }

    pub(crate) fn dir(&self, colour: usize, index: usize) -> &IntDir {
        &self.dirs[colour][index]
    }

    /// Returns a copy with one point replaced.
    pub fn with_point(&self, colour: usize, index: usize, p: Point) -> Result<Self> {
        p.expect_dim(self.dim)?;
        let mut next = self.clone();
        next.dirs[colour][index] = IntDir::from_point(&p);
        next.colours[colour][index] = p;
        Ok(next)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.doc()).expect("configuration serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.doc()).expect("configuration serializes")
    }

    fn doc(&self) -> ConfigurationDoc {
        ConfigurationDoc {
            d: self.dim,
            colours: self.colours.clone(),
        }
    }

    fn all_refs(&self) -> Vec<PointRef> {
        (0..self.size())
            .flat_map(|c| (0..self.size()).map(move |i| (c, i)))
            .collect()
    }

    /// Whether the origin lies in the interior of every colour's hull: all
    /// barycentric coordinates strictly positive.
    pub fn origin_in_interior(&self) -> bool {
        (0..self.size()).all(|c| {
            let dirs: Vec<&IntDir> = self.dirs[c].iter().collect();
            let signs = lifted_cofactor_signs(&dirs);
            signs.iter().all(|&s| s == Sign::Positive)
                || signs.iter().all(|&s| s == Sign::Negative)
        })
    }

    pub fn origin_in_core(&self) -> bool {
        (0..self.size()).all(|c| self.colour_contains_origin(c))
    }

    /// Whether the origin lies in the closed hull of colour `c`.
    pub fn colour_contains_origin(&self, c: usize) -> bool {
        let dirs: Vec<&IntDir> = self.dirs[c].iter().collect();
        simplex_contains_origin_dirs(&dirs)
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.doc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ConfigurationDoc::deserialize(d)?;
        Configuration::new(doc.d, doc.colours).map_err(serde::de::Error::custom)
    }
}

/// Reads a configuration document: `{"d": n, "colours": [[[q, …], …], …]}`.
pub fn parse_configuration(text: &str) -> Result<Configuration> {
    let raw = RawDoc::from_json(text)?;
    let d = raw.d;
    let classes = raw.into_classes(d + 1, d + 1)?;
    Configuration::new(d, classes)
}

/// One point index per colour, naming a colourful simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transversal(pub Vec<usize>);

impl Transversal {
    pub fn choice(&self) -> &[usize] {
        &self.0
    }

    /// The transversal of lexicographic rank `rank` among `(d+1)^(d+1)`.
    pub fn from_rank(size: usize, mut rank: usize) -> Self {
        let mut choice = vec![0; size];
        for slot in choice.iter_mut().rev() {
            *slot = rank % size;
            rank /= size;
        }
        Transversal(choice)
    }

    pub fn vertices<'a>(&self, config: &'a Configuration) -> Vec<&'a Point> {
        self.0
            .iter()
            .enumerate()
            .map(|(c, &i)| config.point(c, i))
            .collect()
    }

    pub(crate) fn dirs<'a>(&self, config: &'a Configuration) -> Vec<&'a IntDir> {
        self.0
            .iter()
            .enumerate()
            .map(|(c, &i)| config.dir(c, i))
            .collect()
    }
}

/// `(d+1)^(d+1)`.
pub fn transversal_count(config: &Configuration) -> usize {
    config.size().pow(config.size() as u32)
}

/// All transversals in lexicographic order.
pub fn enumerate_transversals(config: &Configuration) -> impl Iterator<Item = Transversal> {
    let size = config.size();
    (0..size)
        .map(|_| 0..size)
        .multi_cartesian_product()
        .map(Transversal)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub zero_in_core: bool,
    pub zero_interior: bool,
    pub general_position: bool,
    /// Point subsets witnessing a failure of general position, truncated to
    /// [`MAX_DEGENERATE_WITNESSES`] entries.
    pub degenerate_witnesses: Vec<Vec<PointRef>>,
}

pub const MAX_DEGENERATE_WITNESSES: usize = 64;

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.zero_in_core && self.zero_interior && self.general_position
    }
}

pub fn validate(config: &Configuration) -> ValidationReport {
    let zero_in_core = config.origin_in_core();
    let zero_interior = config.origin_in_interior();
    let witnesses = general_position_witnesses(config, MAX_DEGENERATE_WITNESSES);
    ValidationReport {
        zero_in_core,
        zero_interior,
        general_position: witnesses.is_empty(),
        degenerate_witnesses: witnesses,
    }
}

/// Subsets violating general position: `d+1` affinely dependent points, or
/// `d` points linearly dependent (coplanar with the origin).
fn general_position_witnesses(config: &Configuration, limit: usize) -> Vec<Vec<PointRef>> {
    let refs = config.all_refs();
    let d = config.dim();
    // Affine dependence is not invariant under rescaling individual points,
    // so it is tested on the lifted actual coordinates `(p, 1)`.
    let lifted: Vec<IntDir> = refs
        .iter()
        .map(|&(c, i)| {
            let mut coords = config.point(c, i).coords().to_vec();
            coords.push(num_traits::One::one());
            IntDir::from_point(&Point::new(coords))
        })
        .collect();
    let mut out = Vec::new();
    let linear = (0..refs.len()).combinations(d).filter(|subset| {
        let dirs: Vec<&IntDir> = subset.iter().map(|&k| config.dir(refs[k].0, refs[k].1)).collect();
        int_det_sign(&dirs) == Sign::Zero
    });
    let affine = (0..refs.len()).combinations(d + 1).filter(|subset| {
        let rows: Vec<&IntDir> = subset.iter().map(|&k| &lifted[k]).collect();
        int_det_sign(&rows) == Sign::Zero
    });
    for subset in linear.chain(affine) {
        out.push(subset.iter().map(|&k| refs[k]).collect());
        if out.len() >= limit {
            break;
        }
    }
    out
}
