//! Gluing component spaces onto a base space through link points, and the
//! river and radial metrics on finite planar samples.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::{validate_metric, FiniteMetricSpace};
use crate::rational::{abs_diff, rational_sqrt, Rational};

/// One component `W` hung from the base: its point `link` is identified with
/// the base point `anchor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub space: FiniteMetricSpace,
    pub link: usize,
    pub anchor: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkSpec {
    pub base: FiniteMetricSpace,
    pub components: Vec<Component>,
}

/// Which plane norm the radial metric measures with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadialNorm {
    /// Euclidean; every sample point must have a rational norm.
    #[default]
    Euclidean,
    /// `|x| + |y|`, exact for every rational point.
    Taxicab,
}

/// The linked space on `base ∪ (W_a \ {link_a})`.
///
/// Distances: base pairs keep their base distance; a base point `y` and a
/// component point `z` are `d(y, anchor) + d_W(link, z)` apart; points in
/// two different components are `d(anchor_a, anchor_b) + d_a(link_a, y) +
/// d_b(link_b, z)` apart; points of one component keep that component's
/// distance. New points are listed after the base, component by component.
pub fn glue_spaces(spec: &LinkSpec) -> Result<FiniteMetricSpace> {
    let base = &spec.base;
    for c in &spec.components {
        c.space.check_index(c.link)?;
        base.check_index(c.anchor)?;
    }
    // (component, point) for every non-base point, in output order.
    let extra: Vec<(usize, usize)> = spec
        .components
        .iter()
        .enumerate()
        .flat_map(|(k, c)| (0..c.space.len()).filter(move |&p| p != c.link).map(move |p| (k, p)))
        .collect();

    let mut labels: Vec<String> = base.labels().to_vec();
    let mut seen: HashSet<String> = labels.iter().cloned().collect();
    for &(k, p) in &extra {
        let label = spec.components[k].space.label(p).to_string();
        if !seen.insert(label.clone()) {
            return Err(Error::LabelCollision(label));
        }
        labels.push(label);
    }

    let nb = base.len();
    let total = nb + extra.len();
    // Where each point enters the base, and how far it sits from that entry.
    let mut entry: Vec<usize> = (0..nb).collect();
    let mut height: Vec<Rational> = vec![Rational::zero(); nb];
    let mut owner: Vec<Option<usize>> = vec![None; nb];
    for &(k, p) in &extra {
        let c = &spec.components[k];
        entry.push(c.anchor);
        height.push(c.space.dist(c.link, p).clone());
        owner.push(Some(k));
    }
    let local: Vec<Option<usize>> = (0..nb)
        .map(|_| None)
        .chain(extra.iter().map(|&(_, p)| Some(p)))
        .collect();

    let mut dist = vec![vec![Rational::zero(); total]; total];
    for i in 0..total {
        for j in (i + 1)..total {
            let d = match (owner[i], owner[j]) {
                (Some(a), Some(b)) if a == b => {
                    let w = &spec.components[a].space;
                    w.dist(local[i].unwrap(), local[j].unwrap()).clone()
                }
                _ => base.dist(entry[i], entry[j]) + &height[i] + &height[j],
            };
            dist[i][j] = d.clone();
            dist[j][i] = d;
        }
    }
    validate_metric(labels, dist)
}

fn check_distinct(points: &[(Rational, Rational)], labels: &[String]) -> Result<()> {
    if points.len() != labels.len() {
        return Err(Error::SizeMismatch {
            expected: labels.len(),
            got: points.len(),
        });
    }
    let mut seen = HashSet::new();
    for (p, label) in points.iter().zip(labels) {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint(label.clone()));
        }
    }
    Ok(())
}

fn build(labels: &[String], n: usize, d: impl Fn(usize, usize) -> Rational) -> Result<FiniteMetricSpace> {
    let dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::zero() } else { d(i, j) })
                .collect()
        })
        .collect();
    validate_metric(labels.to_vec(), dist)
}

/// River metric: travel vertically to the x-axis, along it, and back up,
/// unless both points share a vertical line.
pub fn river_metric(points: &[(Rational, Rational)], labels: &[String]) -> Result<FiniteMetricSpace> {
    check_distinct(points, labels)?;
    build(labels, points.len(), |i, j| {
        let (xp, yp) = &points[i];
        let (xq, yq) = &points[j];
        if xp == xq {
            abs_diff(yp, yq)
        } else {
            yp.abs() + abs_diff(xp, xq) + yq.abs()
        }
    })
}

/// Radial metric: travel along rays through the origin.
///
/// Same-ray pairs (`x_p y_q = x_q y_p` with positive dot product) are
/// `| |p| - |q| |` apart, every other pair `|p| + |q|`.
pub fn radial_metric(
    points: &[(Rational, Rational)],
    labels: &[String],
    norm: RadialNorm,
) -> Result<FiniteMetricSpace> {
    check_distinct(points, labels)?;
    let norms = points
        .iter()
        .zip(labels)
        .map(|((x, y), label)| match norm {
            RadialNorm::Taxicab => Ok(x.abs() + y.abs()),
            RadialNorm::Euclidean => {
                rational_sqrt(&(x * x + y * y)).ok_or_else(|| Error::IrrationalNorm(label.clone()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    build(labels, points.len(), |i, j| {
        let (xp, yp) = &points[i];
        let (xq, yq) = &points[j];
        let cross = xp * yq - xq * yp;
        let dot = xp * xq + yp * yq;
        if cross.is_zero() && dot.is_positive() {
            abs_diff(&norms[i], &norms[j])
        } else {
            &norms[i] + &norms[j]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::from_upper;
    use crate::metric::four_point_report;
    use crate::rational::int;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    fn pts(v: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        v.iter().map(|&(x, y)| (int(x), int(y))).collect()
    }

    #[test]
    fn glues_a_pendant_point() {
        let spec = LinkSpec {
            base: from_upper(&["u", "v"], &[2]),
            components: vec![Component {
                space: from_upper(&["g1", "w"], &[1]),
                link: 0,
                anchor: 0,
            }],
        };
        let z = glue_spaces(&spec).unwrap();
        assert_eq!(z.labels(), &["u", "v", "w"]);
        assert_eq!(z.dist(2, 0), &int(1));
        assert_eq!(z.dist(2, 1), &int(3));
        assert_eq!(z.dist(0, 1), &int(2));
    }

    #[test]
    fn two_components_on_one_anchor() {
        let spec = LinkSpec {
            base: from_upper(&["u", "v"], &[2]),
            components: vec![
                Component {
                    space: from_upper(&["g1", "w"], &[1]),
                    link: 0,
                    anchor: 1,
                },
                Component {
                    space: from_upper(&["x", "g2"], &[4]),
                    link: 1,
                    anchor: 1,
                },
            ],
        };
        let z = glue_spaces(&spec).unwrap();
        let (w, x) = (z.index_of("w").unwrap(), z.index_of("x").unwrap());
        assert_eq!(z.dist(w, x), &int(5));
        assert!(four_point_report(&z).holds);
    }

    #[test]
    fn within_component_distances_are_kept() {
        let spec = LinkSpec {
            base: from_upper(&["u"], &[]),
            components: vec![Component {
                space: from_upper(&["g", "x", "y"], &[3, 4, 5]),
                link: 0,
                anchor: 0,
            }],
        };
        let z = glue_spaces(&spec).unwrap();
        assert_eq!(z.dist(1, 2), &int(5));
        assert_eq!(z.dist(0, 2), &int(4));
    }

    #[test]
    fn empty_component_list_is_identity() {
        let base = from_upper(&["u", "v", "w"], &[3, 5, 4]);
        let spec = LinkSpec {
            base: base.clone(),
            components: vec![],
        };
        assert_eq!(glue_spaces(&spec).unwrap(), base);
    }

    #[test]
    fn glue_errors() {
        let spec = LinkSpec {
            base: from_upper(&["u", "w"], &[2]),
            components: vec![Component {
                space: from_upper(&["g", "w"], &[1]),
                link: 0,
                anchor: 0,
            }],
        };
        assert_eq!(glue_spaces(&spec), Err(Error::LabelCollision("w".into())));
        let spec = LinkSpec {
            base: from_upper(&["u"], &[]),
            components: vec![Component {
                space: from_upper(&["g", "w"], &[1]),
                link: 0,
                anchor: 3,
            }],
        };
        assert!(matches!(glue_spaces(&spec), Err(Error::InvalidIndex { .. })));
    }

    #[test]
    fn river_examples() {
        let d = |a: (i64, i64), b: (i64, i64)| river_metric(&pts(&[a, b]), &labels(2)).unwrap().dist(0, 1).clone();
        assert_eq!(d((0, 0), (0, 1)), int(1));
        assert_eq!(d((0, 1), (2, 3)), int(6));
        assert_eq!(d((0, 0), (2, 3)), int(5));
        assert_eq!(d((1, -2), (3, 4)), int(8));
        assert!(matches!(
            river_metric(&pts(&[(1, 1), (1, 1)]), &labels(2)),
            Err(Error::DuplicatePoint(_))
        ));
    }

    #[test]
    fn radial_examples() {
        let d = |a: (i64, i64), b: (i64, i64)| {
            radial_metric(&pts(&[a, b]), &labels(2), RadialNorm::Euclidean)
                .unwrap()
                .dist(0, 1)
                .clone()
        };
        assert_eq!(d((3, 4), (6, 8)), int(5));
        assert_eq!(d((1, 0), (0, 1)), int(2));
        assert_eq!(d((3, 4), (0, 0)), int(5));
        assert_eq!(d((3, 4), (-3, -4)), int(10));
        assert_eq!(
            radial_metric(&pts(&[(1, 1), (2, 0)]), &labels(2), RadialNorm::Euclidean),
            Err(Error::IrrationalNorm("p0".into()))
        );
        let s = radial_metric(&pts(&[(1, 1), (2, 2), (1, -2)]), &labels(3), RadialNorm::Taxicab).unwrap();
        assert_eq!(s.dist(0, 1), &int(2));
        assert_eq!(s.dist(0, 2), &int(5));
    }
}
