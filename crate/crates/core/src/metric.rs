//! Validated finite metric spaces and the scans that run directly on the
//! distance matrix: four-point diagnostics, metric intervals, medians and the
//! finite ball-intersection check.

use std::collections::HashSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Labeled points with an exact distance matrix satisfying the metric axioms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

impl FiniteMetricSpace {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidIndex { index, len: self.len() })
        }
    }

    /// Same labels, every distance multiplied by `factor` (> 0).
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        let dist = self
            .dist
            .iter()
            .map(|row| row.iter().map(|d| d * factor).collect())
            .collect();
        validate_metric(self.labels.clone(), dist)
    }

    /// Points reordered so that new point `k` is old point `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.dist[i][j].clone()).collect())
            .collect();
        validate_metric(labels, dist)
    }

    /// Subspace on the given points, in the given order.
    pub fn restricted(&self, points: &[usize]) -> Result<Self> {
        for &p in points {
            self.check_index(p)?;
        }
        self.permuted(points)
    }
}

/// Checks every metric axiom and returns the validated space.
pub fn validate_metric(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<FiniteMetricSpace> {
    let n = labels.len();
    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(Error::ShapeMismatch {
            rows: matrix.len(),
            labels: n,
        });
    }
    let mut seen = HashSet::with_capacity(n);
    for (i, label) in labels.iter().enumerate() {
        if label.is_empty() {
            return Err(Error::EmptyLabel(i));
        }
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    let pair = |i: usize, j: usize| (labels[i].clone(), labels[j].clone());
    for i in 0..n {
        if !matrix[i][i].is_zero() {
            return Err(Error::NonzeroDiagonal {
                label: labels[i].clone(),
            });
        }
        for j in (i + 1)..n {
            let (a, b) = pair(i, j);
            if matrix[i][j] != matrix[j][i] {
                return Err(Error::AsymmetricMatrix { a, b });
            }
            if matrix[i][j].is_negative() {
                return Err(Error::NegativeDistance { a, b });
            }
            if matrix[i][j].is_zero() {
                return Err(Error::ZeroDistanceBetweenDistinctLabels { a, b });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if matrix[i][k] > &matrix[i][j] + &matrix[j][k] {
                    return Err(Error::TriangleViolation {
                        x: labels[i].clone(),
                        y: labels[j].clone(),
                        z: labels[k].clone(),
                    });
                }
            }
        }
    }
    Ok(FiniteMetricSpace { labels, dist: matrix })
}

/// Outcome of the exhaustive four-point scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FourPointReport {
    pub holds: bool,
    pub worst_quadruple: [usize; 4],
    #[serde(serialize_with = "crate::io::serialize_rational")]
    pub excess: Rational,
}

/// Violation of the four-point condition at `(x, y, u, v)`, possibly negative.
fn quadruple_excess(space: &FiniteMetricSpace, x: usize, y: usize, u: usize, v: usize) -> Rational {
    let d = |a: usize, b: usize| space.dist(a, b);
    let lhs = d(x, y) + d(u, v);
    let first = d(x, u) + d(y, v);
    let second = d(x, v) + d(y, u);
    lhs - first.max(second)
}

/// Scans every quadruple, repeated points included, for the worst violation
/// of `d(x,y) + d(u,v) <= max(d(x,u) + d(y,v), d(x,v) + d(y,u))`.
///
/// The excess expression is invariant under swapping `x`/`y`, `u`/`v` and the
/// two pairs, so only canonical quadruples `x <= y`, `u <= v`,
/// `(x,y) <= (u,v)` are visited. They are visited in lexicographic order and
/// only strict improvements replace the incumbent, so ties resolve to the
/// lexicographically smallest quadruple. Cost is O(n^4); intended for
/// n <= 64.
pub fn four_point_report(space: &FiniteMetricSpace) -> FourPointReport {
    let n = space.len();
    let mut worst = [0usize; 4];
    let mut excess = Rational::zero();
    for x in 0..n {
        for y in x..n {
            for u in x..n {
                let v_start = if u == x { y } else { u };
                for v in v_start..n {
                    let e = quadruple_excess(space, x, y, u, v);
                    if e > excess {
                        excess = e;
                        worst = [x, y, u, v];
                    }
                }
            }
        }
    }
    FourPointReport {
        holds: excess.is_zero(),
        worst_quadruple: worst,
        excess,
    }
}

/// `<x,y>`: every point `z` with `d(x,z) + d(z,y) = d(x,y)`, in index order.
pub fn metric_interval(space: &FiniteMetricSpace, x: usize, y: usize) -> Result<Vec<usize>> {
    space.check_index(x)?;
    space.check_index(y)?;
    let target = space.dist(x, y);
    Ok((0..space.len())
        .filter(|&z| &(space.dist(x, z) + space.dist(z, y)) == target)
        .collect())
}

/// Intersection of the three pairwise intervals; may be empty off trees.
pub fn median_points(space: &FiniteMetricSpace, x: usize, y: usize, z: usize) -> Result<Vec<usize>> {
    let xy = metric_interval(space, x, y)?;
    let yz: HashSet<usize> = metric_interval(space, y, z)?.into_iter().collect();
    let zx: HashSet<usize> = metric_interval(space, z, x)?.into_iter().collect();
    Ok(xy.into_iter().filter(|p| yz.contains(p) && zx.contains(p)).collect())
}

/// A closed ball `B(center; radius)` around a point of a finite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: usize,
    pub radius: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BallFamily {
    entries: Vec<Ball>,
}

impl BallFamily {
    /// Validates centers against `space` and rejects negative radii.
    pub fn new(space: &FiniteMetricSpace, entries: Vec<Ball>) -> Result<Self> {
        for (i, ball) in entries.iter().enumerate() {
            space.check_index(ball.center)?;
            if ball.radius.is_negative() {
                return Err(Error::NegativeRadius(i));
            }
        }
        Ok(Self { entries })
    }

    pub fn from_pairs(space: &FiniteMetricSpace, pairs: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        Self::new(
            space,
            pairs
                .into_iter()
                .map(|(center, radius)| Ball { center, radius })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[Ball] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// First pair (in index order) with `d(c_i, c_j) > r_i + r_j`.
    pub fn first_non_overlapping(&self, space: &FiniteMetricSpace) -> Option<(usize, usize)> {
        let e = &self.entries;
        for i in 0..e.len() {
            for j in (i + 1)..e.len() {
                if space.dist(e[i].center, e[j].center) > &(&e[i].radius + &e[j].radius) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub(crate) fn overlap_error(&self, space: &FiniteMetricSpace) -> Result<()> {
        match self.first_non_overlapping(space) {
            Some((i, j)) => Err(Error::NotPairwiseOverlapping {
                a: space.label(self.entries[i].center).to_string(),
                b: space.label(self.entries[j].center).to_string(),
            }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallCheck {
    pub pairwise_ok: bool,
    pub witness: Option<usize>,
}

/// Checks whether a pairwise-overlapping family has a common point among the
/// space's own points.
///
/// `pairwise_ok` is the overlap condition `d(c_i, c_j) <= r_i + r_j` for every
/// pair. `witness` is the first point lying in every ball. Overlapping balls
/// without a witness show the finite point set lacks the binary
/// ball-intersection property even where its continuum hull has it.
pub fn binary_ball_intersection_check(space: &FiniteMetricSpace, family: &BallFamily) -> BallCheck {
    let e = family.entries();
    let pairwise_ok = family.first_non_overlapping(space).is_none();
    let witness = (0..space.len()).find(|&p| e.iter().all(|b| space.dist(p, b.center) <= &b.radius));
    BallCheck { pairwise_ok, witness }
}
