//! Extending maps from a subset of a finite metric space while keeping a
//! prescribed modulus of continuity.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::rational::{abs_diff, Rational};
use crate::tree::{tree_ball_intersection, tree_distance, TreePoint, WeightedTree};

/// `omega(t) = min_i (a_i t + b_i)` with `a_i, b_i >= 0`: concave,
/// nondecreasing and therefore subadditive on `t >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modulus {
    pieces: Vec<(Rational, Rational)>,
}

impl Modulus {
    pub fn new(pieces: Vec<(Rational, Rational)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidModulus("no pieces".into()));
        }
        if pieces.iter().any(|(a, b)| a.is_negative() || b.is_negative()) {
            return Err(Error::InvalidModulus(
                "slopes and intercepts must be nonnegative".into(),
            ));
        }
        Ok(Self { pieces })
    }

    /// `omega(t) = lipschitz * t`.
    pub fn lipschitz(constant: Rational) -> Result<Self> {
        Self::new(vec![(constant, Rational::zero())])
    }

    pub fn pieces(&self) -> &[(Rational, Rational)] {
        &self.pieces
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.pieces
            .iter()
            .map(|(a, b)| a * t + b)
            .min()
            .expect("modulus has pieces")
    }

    /// The constant `L` when this is exactly `omega(t) = L t`.
    pub fn as_lipschitz(&self) -> Option<&Rational> {
        match self.pieces.as_slice() {
            [(a, b)] if b.is_zero() => Some(a),
            _ => None,
        }
    }
}

/// Values of a partial map, either vectors in `(Q^k, sup)` or points of a
/// weighted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapValues {
    SupNorm(Vec<Vec<Rational>>),
    Tree { tree: WeightedTree, points: Vec<TreePoint> },
}

/// A map defined on `subset` of `domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap {
    domain: FiniteMetricSpace,
    subset: Vec<usize>,
    values: MapValues,
}

impl PartialMap {
    pub fn new(domain: FiniteMetricSpace, subset: Vec<usize>, values: MapValues) -> Result<Self> {
        let mut seen = HashSet::new();
        for &p in &subset {
            domain.check_index(p)?;
            if !seen.insert(p) {
                return Err(Error::DegenerateSubset(format!(
                    "point {} listed twice",
                    domain.label(p)
                )));
            }
        }
        let count = match &values {
            MapValues::SupNorm(rows) => {
                if let Some(first) = rows.first() {
                    if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
                        return Err(Error::SizeMismatch {
                            expected: first.len(),
                            got: bad.len(),
                        });
                    }
                }
                rows.len()
            }
            MapValues::Tree { tree, points } => {
                for p in points {
                    tree.check_point(p)?;
                }
                points.len()
            }
        };
        if count != subset.len() {
            return Err(Error::SizeMismatch {
                expected: subset.len(),
                got: count,
            });
        }
        Ok(Self { domain, subset, values })
    }

    pub fn sup_norm(domain: FiniteMetricSpace, subset: Vec<usize>, values: Vec<Vec<Rational>>) -> Result<Self> {
        Self::new(domain, subset, MapValues::SupNorm(values))
    }

    pub fn into_tree(
        domain: FiniteMetricSpace,
        subset: Vec<usize>,
        tree: WeightedTree,
        points: Vec<TreePoint>,
    ) -> Result<Self> {
        Self::new(domain, subset, MapValues::Tree { tree, points })
    }

    pub fn domain(&self) -> &FiniteMetricSpace {
        &self.domain
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn values(&self) -> &MapValues {
        &self.values
    }

    /// Distance in the target between the images of subset entries `i`, `j`.
    fn target_distance(&self, i: usize, j: usize) -> Rational {
        match &self.values {
            MapValues::SupNorm(rows) => sup_norm_distance(&rows[i], &rows[j]),
            MapValues::Tree { tree, points } => {
                tree_distance(tree, &points[i], &points[j]).expect("points checked on construction")
            }
        }
    }

    fn violation(&self, i: usize, j: usize) -> Error {
        Error::ModulusViolated {
            a: self.domain.label(self.subset[i]).to_string(),
            b: self.domain.label(self.subset[j]).to_string(),
        }
    }
}

pub fn sup_norm_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| abs_diff(x, y))
        .max()
        .unwrap_or_else(Rational::zero)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusReport {
    pub ok: bool,
    /// Domain indices of the pair with the largest excess.
    pub worst_pair: Option<(usize, usize)>,
    /// `max (target_dist - omega(d))` over subset pairs; zero without pairs.
    pub excess: Rational,
}

pub fn modulus_check(map: &PartialMap, modulus: &Modulus) -> ModulusReport {
    let m = map.subset.len();
    let mut worst: Option<((usize, usize), Rational)> = None;
    for i in 0..m {
        for j in (i + 1)..m {
            let (x, y) = (map.subset[i], map.subset[j]);
            let excess = map.target_distance(i, j) - modulus.eval(map.domain.dist(x, y));
            if worst.as_ref().is_none_or(|(_, w)| &excess > w) {
                worst = Some(((x, y), excess));
            }
        }
    }
    match worst {
        Some((pair, excess)) => ModulusReport {
            ok: !excess.is_positive(),
            worst_pair: Some(pair),
            excess,
        },
        None => ModulusReport {
            ok: true,
            worst_pair: None,
            excess: Rational::zero(),
        },
    }
}

fn require_modulus(map: &PartialMap, modulus: &Modulus) -> Result<()> {
    let report = modulus_check(map, modulus);
    if report.ok {
        return Ok(());
    }
    let (x, y) = report.worst_pair.expect("a failing check has a pair");
    Err(Error::ModulusViolated {
        a: map.domain.label(x).to_string(),
        b: map.domain.label(y).to_string(),
    })
}

/// Lower envelope extension into `(Q^k, sup)`.
///
/// Each coordinate at an unmapped point `z` becomes
/// `min_x (f_j(x) + omega(d(z, x)))` over the subset; subset points keep
/// their values. Rows are indexed by domain point.
pub fn extend_with_modulus(map: &PartialMap, modulus: &Modulus) -> Result<Vec<Vec<Rational>>> {
    let MapValues::SupNorm(rows) = &map.values else {
        return Err(Error::WrongTarget("sup-norm"));
    };
    require_modulus(map, modulus)?;
    let k = rows.first().map_or(0, Vec::len);
    let n = map.domain.len();
    let mut out = Vec::with_capacity(n);
    for z in 0..n {
        if let Some(i) = map.subset.iter().position(|&x| x == z) {
            out.push(rows[i].clone());
            continue;
        }
        if map.subset.is_empty() {
            out.push(vec![Rational::zero(); k]);
            continue;
        }
        let row = (0..k)
            .map(|j| {
                map.subset
                    .iter()
                    .zip(rows)
                    .map(|(&x, row)| &row[j] + modulus.eval(map.domain.dist(z, x)))
                    .min()
                    .expect("nonempty subset")
            })
            .collect();
        out.push(row);
    }
    Ok(out)
}

/// `lipschitz`-Lipschitz extension into a tree by one ball-intersection step
/// per unmapped point, in ascending index order.
///
/// The new image of `z` is the tree point minimizing the worst ball excess
/// over `B(f(x), L d(z, x))` for the points `x` mapped so far; those balls
/// pairwise overlap because `f` is already `L`-Lipschitz on them.
pub fn extend_into_tree(map: &PartialMap, lipschitz: &Rational) -> Result<Vec<TreePoint>> {
    let MapValues::Tree { tree, points } = &map.values else {
        return Err(Error::WrongTarget("tree"));
    };
    if lipschitz.is_negative() {
        return Err(Error::InvalidModulus("negative Lipschitz constant".into()));
    }
    require_modulus(map, &Modulus::lipschitz(lipschitz.clone())?)?;
    let n = map.domain.len();
    let mut image: Vec<Option<TreePoint>> = vec![None; n];
    for (&x, p) in map.subset.iter().zip(points) {
        image[x] = Some(p.clone());
    }
    for z in 0..n {
        if image[z].is_some() {
            continue;
        }
        let balls: Vec<(TreePoint, Rational)> = (0..n)
            .filter_map(|x| {
                image[x]
                    .as_ref()
                    .map(|p| (p.clone(), lipschitz * map.domain.dist(z, x)))
            })
            .collect();
        let point = tree_ball_intersection(tree, &balls)?.ok_or_else(|| {
            let i = map.subset.first().copied().unwrap_or(z);
            Error::ModulusViolated {
                a: map.domain.label(i).to_string(),
                b: map.domain.label(z).to_string(),
            }
        })?;
        image[z] = Some(point);
    }
    Ok(image.into_iter().map(|p| p.expect("every point mapped")).collect())
}

/// Smallest `L` with `target_dist <= L d` on the subset.
pub fn lipschitz_constant_of(map: &PartialMap) -> Result<Rational> {
    let m = map.subset.len();
    if m < 2 {
        return Err(Error::DegenerateSubset("fewer than two points".into()));
    }
    let mut best = Rational::zero();
    for i in 0..m {
        for j in (i + 1)..m {
            let d = map.domain.dist(map.subset[i], map.subset[j]);
            if d.is_zero() {
                return Err(map.violation(i, j));
            }
            let ratio = map.target_distance(i, j) / d;
            if ratio > best {
                best = ratio;
            }
        }
    }
    Ok(best)
}
