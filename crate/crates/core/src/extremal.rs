//! Extremal functions on a finite metric space.
//!
//! A function `f` on the points is admissible (extremal) when
//! `f(x) + f(y) >= d(x,y)` for every pair, the pair `x = y` included, and
//! minimal when no admissible function lies pointwise below it. Minimal
//! functions are the points of the tight span; the distance cone
//! `h_x = d(x, .)` is the image of `x` there.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::metric::{BallFamily, FiniteMetricSpace};
use crate::rational::{abs_diff, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtremalFunction {
    values: Vec<Rational>,
}

impl ExtremalFunction {
    /// Wraps raw values without checking admissibility.
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Rational {
        &self.values[x]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }
}

impl From<Vec<Rational>> for ExtremalFunction {
    fn from(values: Vec<Rational>) -> Self {
        Self::new(values)
    }
}

fn check_size(space: &FiniteMetricSpace, f: &ExtremalFunction) -> Result<()> {
    if f.len() == space.len() {
        Ok(())
    } else {
        Err(Error::SizeMismatch {
            expected: space.len(),
            got: f.len(),
        })
    }
}

/// `h_v(z) = d(v, z)`.
pub fn distance_cone(space: &FiniteMetricSpace, v: usize) -> Result<ExtremalFunction> {
    space.check_index(v)?;
    Ok(ExtremalFunction::new(space.matrix()[v].clone()))
}

/// First pair `(x, y)`, `x <= y`, with `f(x) + f(y) < d(x, y)`.
pub fn first_violation(space: &FiniteMetricSpace, f: &ExtremalFunction) -> Option<(usize, usize)> {
    let n = space.len();
    (0..n)
        .flat_map(|x| (x..n).map(move |y| (x, y)))
        .find(|&(x, y)| &(f.value(x) + f.value(y)) < space.dist(x, y))
}

pub fn is_admissible(space: &FiniteMetricSpace, f: &ExtremalFunction) -> Result<bool> {
    check_size(space, f)?;
    Ok(first_violation(space, f).is_none())
}

fn require_admissible(space: &FiniteMetricSpace, f: &ExtremalFunction) -> Result<()> {
    check_size(space, f)?;
    match first_violation(space, f) {
        Some((x, y)) => Err(Error::NotAdmissible {
            a: space.label(x).to_string(),
            b: space.label(y).to_string(),
        }),
        None => Ok(()),
    }
}

/// `max_w (d(x, w) - f(w))`, the smallest value at `x` the other values allow.
pub fn conjugate_value(space: &FiniteMetricSpace, f: &ExtremalFunction, x: usize) -> Rational {
    (0..space.len())
        .map(|w| space.dist(x, w) - f.value(w))
        .max()
        .expect("conjugate of a function on an empty space")
}

/// Fixpoint test: `f(x) = max_w (d(x, w) - f(w))` at every point.
pub fn is_minimal(space: &FiniteMetricSpace, f: &ExtremalFunction) -> Result<bool> {
    require_admissible(space, f)?;
    Ok((0..space.len()).all(|x| &conjugate_value(space, f, x) == f.value(x)))
}

/// `x -> min_a (d(x, c_a) + r_a)` for a pairwise-overlapping family.
pub fn extend_ball_family(space: &FiniteMetricSpace, family: &BallFamily) -> Result<ExtremalFunction> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    family.overlap_error(space)?;
    let values = (0..space.len())
        .map(|x| {
            family
                .entries()
                .iter()
                .map(|b| space.dist(x, b.center) + &b.radius)
                .min()
                .expect("nonempty family")
        })
        .collect();
    Ok(ExtremalFunction::new(values))
}

/// Shrinks an admissible function to a minimal one lying below it.
///
/// Passes run over the points in ascending index order, replacing `f(x)` by
/// `max(0, max_{y != x} (d(x,y) - f(y)))`, until a pass changes nothing.
/// Each update keeps `f` admissible and never increases a value.
pub fn minimize_to_extremal(space: &FiniteMetricSpace, f: &ExtremalFunction) -> Result<ExtremalFunction> {
    require_admissible(space, f)?;
    let n = space.len();
    let mut values = f.values.clone();
    let mut changing_passes = 0;
    loop {
        let mut changed = false;
        for x in 0..n {
            let mut best = Rational::zero();
            for y in (0..n).filter(|&y| y != x) {
                let candidate = space.dist(x, y) - &values[y];
                if candidate > best {
                    best = candidate;
                }
            }
            if best != values[x] {
                values[x] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        changing_passes += 1;
        if changing_passes > n + 1 {
            return Err(Error::NonTermination {
                passes: changing_passes,
            });
        }
    }
    Ok(ExtremalFunction::new(values))
}

/// Sup metric `max_x |f(x) - g(x)|`; zero on the empty space.
pub fn sup_distance(f: &ExtremalFunction, g: &ExtremalFunction) -> Result<Rational> {
    if f.len() != g.len() {
        return Err(Error::SpaceMismatch);
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| abs_diff(a, b))
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Pairs `(x, y)`, `x <= y`, with `f(x) + f(y) = d(x, y)`. Loops `(x, x)`
/// appear exactly where `f(x) = 0`.
pub fn tight_graph(space: &FiniteMetricSpace, f: &ExtremalFunction) -> Vec<(usize, usize)> {
    let n = space.len();
    (0..n)
        .flat_map(|x| (x..n).map(move |y| (x, y)))
        .filter(|&(x, y)| &(f.value(x) + f.value(y)) == space.dist(x, y))
        .collect()
}

/// Rank of the constraint rows `e_x + e_y` over the given pairs.
///
/// For this signless incidence structure the rank is the number of nodes
/// minus the number of bipartite connected components (an isolated node is
/// a bipartite component; a loop makes its component non-bipartite).
pub fn tight_rank(n: usize, pairs: &[(usize, usize)]) -> usize {
    let mut dsu = ParityDsu::new(n);
    for &(x, y) in pairs {
        dsu.union_odd(x, y);
    }
    let bipartite = (0..n).filter(|&x| dsu.find(x).0 == x && !dsu.odd_cycle[x]).count();
    n - bipartite
}

/// Union-find tracking the parity of the path to the root, used to detect
/// odd cycles.
struct ParityDsu {
    parent: Vec<usize>,
    parity: Vec<bool>,
    odd_cycle: Vec<bool>,
}

impl ParityDsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            parity: vec![false; n],
            odd_cycle: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.parity[x] ^= p;
        (root, self.parity[x])
    }

    /// Joins `x` and `y` by an edge forcing opposite sides.
    fn union_odd(&mut self, x: usize, y: usize) {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            if px == py {
                self.odd_cycle[rx] = true;
            }
        } else {
            self.parent[ry] = rx;
            self.parity[ry] = !(px ^ py);
            self.odd_cycle[rx] |= self.odd_cycle[ry];
        }
    }
}
