//! The tight span (injective hull) of a finite metric space.
//!
//! Points of the hull are the minimal extremal functions under the sup
//! metric. They form the bounded faces of the polyhedron
//! `P = { f : f(x) + f(y) >= d(x,y) for all x <= y }`, so the hull's vertices
//! are exactly the vertices of `P`.
//!
//! Vertices are enumerated by walking the bounded edges of `P`, starting at
//! the distance cone of the first point. At a vertex `v` with tight graph
//! `A`, every edge direction of `P` has the form `u = 1_P - 1_M` for
//! disjoint point sets `P`, `M`:
//!
//! * feasibility: every tight pair touching `M` has its other end in `P`
//!   (so no tight loop sits in `M`);
//! * extremality: the tight `P`-`M` pairs connect `P ∪ M`, and every
//!   component of the tight pairs inside the remaining points contains an
//!   odd cycle (loops count), giving the tight rows rank `n - 1`.
//!
//! Stepping along `u` until the first slack constraint becomes tight lands on
//! the neighbouring vertex; directions with no such constraint are unbounded
//! rays and are not part of the hull. The bounded-edge graph of a pointed
//! polyhedron is connected, so the walk reaches every vertex.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::extremal::{
    distance_cone, extend_ball_family, is_admissible, is_minimal, minimize_to_extremal, sup_distance, tight_graph,
    tight_rank, ExtremalFunction,
};
use crate::metric::{validate_metric, BallFamily, FiniteMetricSpace};
use crate::rational::{int, Rational};

/// Default bound on the number of points accepted by the enumerator.
pub const DEFAULT_MAX_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightSpanComplex {
    space: FiniteMetricSpace,
    vertices: Vec<ExtremalFunction>,
    cone_points: Vec<Option<usize>>,
    vertex_tight_graphs: Vec<Vec<(usize, usize)>>,
    dimension: usize,
    edges: Vec<(usize, usize)>,
}

impl TightSpanComplex {
    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    /// Vertices sorted lexicographically by value vector.
    pub fn vertices(&self) -> &[ExtremalFunction] {
        &self.vertices
    }

    /// `Some(x)` when vertex `i` is the distance cone of point `x`.
    pub fn cone_point(&self, i: usize) -> Option<usize> {
        self.cone_points[i]
    }

    pub fn vertex_tight_graph(&self, i: usize) -> &[(usize, usize)] {
        &self.vertex_tight_graphs[i]
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// 1-skeleton as pairs `(i, j)` of vertex indices, `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Vertex index of the distance cone of point `x`.
    pub fn cone_vertex(&self, x: usize) -> Option<usize> {
        self.cone_points.iter().position(|c| *c == Some(x))
    }

    /// Vertex names: cones keep their point label, the rest get `s1, s2, ...`
    /// in vertex order, skipping names the space already uses.
    pub fn vertex_labels(&self) -> Vec<String> {
        let extra = self.cone_points.iter().filter(|c| c.is_none()).count();
        let mut synthetic = synthetic_labels(self.space.labels(), extra).into_iter();
        self.cone_points
            .iter()
            .map(|c| match c {
                Some(x) => self.space.label(*x).to_string(),
                None => synthetic.next().expect("one name per non-cone vertex"),
            })
            .collect()
    }
}

/// `count` fresh names `s1, s2, ...` avoiding everything in `taken`.
pub fn synthetic_labels(taken: &[String], count: usize) -> Vec<String> {
    let taken: HashSet<&str> = taken.iter().map(String::as_str).collect();
    (1..)
        .map(|k| format!("s{k}"))
        .filter(|name| !taken.contains(name.as_str()))
        .take(count)
        .collect()
}

/// Enumerates the hull with the default point bound.
pub fn enumerate_tight_span(space: &FiniteMetricSpace) -> Result<TightSpanComplex> {
    enumerate_tight_span_bounded(space, DEFAULT_MAX_POINTS)
}

pub fn enumerate_tight_span_bounded(space: &FiniteMetricSpace, max_points: usize) -> Result<TightSpanComplex> {
    let n = space.len();
    if n > max_points {
        return Err(Error::TooLarge { n, max: max_points });
    }
    let vertices: Vec<ExtremalFunction> = walk_vertices(space).into_iter().collect();
    let cones: Vec<ExtremalFunction> = (0..n).map(|x| distance_cone(space, x)).collect::<Result<_>>()?;
    let cone_points = vertices.iter().map(|v| cones.iter().position(|c| c == v)).collect();
    let vertex_tight_graphs = vertices.iter().map(|v| tight_graph(space, v)).collect();
    let edges = skeleton_edges(space, &vertices);
    let dimension = complex_dimension(space, &vertices, &edges);
    Ok(TightSpanComplex {
        space: space.clone(),
        vertices,
        cone_points,
        vertex_tight_graphs,
        dimension,
        edges,
    })
}

fn walk_vertices(space: &FiniteMetricSpace) -> BTreeSet<ExtremalFunction> {
    let mut seen = BTreeSet::new();
    if space.is_empty() {
        return seen;
    }
    let start = distance_cone(space, 0).expect("nonempty space");
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(v) = queue.pop_front() {
        let active = tight_graph(space, &v);
        for direction in edge_directions(space.len(), &active) {
            if let Some(w) = step_along(space, &v, &direction) {
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
    }
    seen
}

/// Extreme rays `1_P - 1_M` of the cone `{u : u_x + u_y >= 0 on tight pairs}`.
fn edge_directions(n: usize, active: &[(usize, usize)]) -> Vec<Vec<i8>> {
    let mut adj = vec![Vec::new(); n];
    for &(x, y) in active {
        adj[x].push(y);
        if x != y {
            adj[y].push(x);
        }
    }
    let mut out = Vec::new();
    let mut signs = vec![0i8; n];
    assign_signs(0, &adj, &mut signs, &mut out);
    out
}

fn assign_signs(i: usize, adj: &[Vec<usize>], signs: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
    let n = adj.len();
    if i == n {
        if is_extreme_ray(adj, signs) {
            out.push(signs.clone());
        }
        return;
    }
    for s in [0i8, 1, -1] {
        signs[i] = s;
        let feasible = adj[i].iter().filter(|&&j| j <= i).all(|&j| signs[i] + signs[j] >= 0);
        if feasible {
            assign_signs(i + 1, adj, signs, out);
        }
    }
    signs[i] = 0;
}

fn is_extreme_ray(adj: &[Vec<usize>], signs: &[i8]) -> bool {
    let n = adj.len();
    let support: Vec<usize> = (0..n).filter(|&x| signs[x] != 0).collect();
    let Some(&root) = support.first() else {
        return false;
    };
    // P ∪ M must be connected through tight P-M pairs.
    let mut reached = vec![false; n];
    reached[root] = true;
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !reached[y] && signs[y] != 0 && signs[x] + signs[y] == 0 {
                reached[y] = true;
                stack.push(y);
            }
        }
    }
    if support.iter().any(|&x| !reached[x]) {
        return false;
    }
    // Every component of the tight pairs among the zero points needs an odd cycle.
    let zero: Vec<usize> = (0..n).filter(|&x| signs[x] == 0).collect();
    let pairs: Vec<(usize, usize)> = zero
        .iter()
        .flat_map(|&x| {
            adj[x]
                .iter()
                .filter(move |&&y| y >= x && signs[y] == 0)
                .map(move |&y| (x, y))
        })
        .collect();
    let index_of = |x: usize| zero.binary_search(&x).expect("zero point");
    let local: Vec<(usize, usize)> = pairs.iter().map(|&(x, y)| (index_of(x), index_of(y))).collect();
    tight_rank(zero.len(), &local) == zero.len()
}

fn step_along(space: &FiniteMetricSpace, v: &ExtremalFunction, direction: &[i8]) -> Option<ExtremalFunction> {
    let n = space.len();
    let mut best: Option<Rational> = None;
    for x in 0..n {
        for y in x..n {
            let rate = direction[x] + direction[y];
            if rate >= 0 {
                continue;
            }
            let slack = v.value(x) + v.value(y) - space.dist(x, y);
            if slack.is_zero() {
                // A tight pair with negative rate means the direction is infeasible.
                return None;
            }
            let t = slack / int(-(rate as i64));
            if best.as_ref().is_none_or(|b| &t < b) {
                best = Some(t);
            }
        }
    }
    let t = best?;
    Some(ExtremalFunction::new(
        (0..n).map(|x| v.value(x) + &t * int(direction[x] as i64)).collect(),
    ))
}

fn centroid(points: &[&ExtremalFunction]) -> ExtremalFunction {
    let n = points[0].len();
    let k = int(points.len() as i64);
    ExtremalFunction::new(
        (0..n)
            .map(|x| points.iter().map(|p| p.value(x).clone()).sum::<Rational>() / &k)
            .collect(),
    )
}

/// Tight-graph rank at `f` when `f` lies in the hull.
fn hull_rank(space: &FiniteMetricSpace, f: &ExtremalFunction) -> Option<usize> {
    if is_minimal(space, f).unwrap_or(false) {
        Some(tight_rank(space.len(), &tight_graph(space, f)))
    } else {
        None
    }
}

/// Vertex pairs whose midpoint is in the hull with tight rank at least `n - 1`.
fn skeleton_edges(space: &FiniteMetricSpace, vertices: &[ExtremalFunction]) -> Vec<(usize, usize)> {
    let n = space.len();
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            let mid = centroid(&[&vertices[i], &vertices[j]]);
            if hull_rank(space, &mid).is_some_and(|r| r + 1 >= n) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Largest cell dimension, `n - rank` of the tight graph at a relative
/// interior point.
///
/// Every k-cell has a vertex with k skeleton edges spanning it, and the
/// centroid of that vertex and those k neighbours is relatively interior to
/// the cell. So probing centroids of a vertex plus subsets of its skeleton
/// neighbours finds the maximum; every probe landing in the hull is a
/// genuine lower bound. Cells never exceed dimension `n / 2` because the
/// tight graph of a hull point has no isolated nodes.
fn complex_dimension(space: &FiniteMetricSpace, vertices: &[ExtremalFunction], edges: &[(usize, usize)]) -> usize {
    let n = space.len();
    if edges.is_empty() {
        return 0;
    }
    let cap = n / 2;
    let mut neighbours = vec![Vec::new(); vertices.len()];
    for &(i, j) in edges {
        neighbours[i].push(j);
        neighbours[j].push(i);
    }
    let mut dimension = 1;
    for k in 2..=cap {
        let mut found = false;
        'vertices: for (v, nbrs) in neighbours.iter().enumerate() {
            for subset in combinations(nbrs.len(), k) {
                let mut pts: Vec<&ExtremalFunction> = vec![&vertices[v]];
                pts.extend(subset.iter().map(|&s| &vertices[nbrs[s]]));
                if let Some(rank) = hull_rank(space, &centroid(&pts)) {
                    dimension = dimension.max(n - rank);
                    if n - rank >= k {
                        found = true;
                        break 'vertices;
                    }
                }
            }
        }
        // A (k+1)-cell contains k-cells, so stop once no k-cell exists.
        if !found {
            break;
        }
    }
    dimension
}

/// All increasing index tuples of length `k` drawn from `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Admissible and minimal; `false` for a function of the wrong size.
pub fn membership(space: &FiniteMetricSpace, f: &ExtremalFunction) -> bool {
    is_admissible(space, f).unwrap_or(false) && is_minimal(space, f).unwrap_or(false)
}

/// The vertices as a metric space under the sup distance.
pub fn vertex_metric_space(complex: &TightSpanComplex) -> Result<FiniteMetricSpace> {
    let vs = complex.vertices();
    let dist = vs
        .iter()
        .map(|f| vs.iter().map(|g| sup_distance(f, g)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    validate_metric(complex.vertex_labels(), dist)
}

/// A hull point inside every lifted ball of a pairwise-overlapping family.
pub fn ball_intersection_witness(space: &FiniteMetricSpace, family: &BallFamily) -> Result<ExtremalFunction> {
    let lifted = extend_ball_family(space, family)?;
    minimize_to_extremal(space, &lifted)
}

/// The isometric embedding `x -> h_x` of the space into its hull.
pub fn embed_point(space: &FiniteMetricSpace, x: usize) -> Result<ExtremalFunction> {
    distance_cone(space, x)
}

/// The space with one extra point whose distances to the old points are the
/// values of `f`. For a hull point `f` with all values positive this is a
/// metric space.
pub fn adjoin_point(space: &FiniteMetricSpace, f: &ExtremalFunction, label: &str) -> Result<FiniteMetricSpace> {
    if f.len() != space.len() {
        return Err(Error::SizeMismatch {
            expected: space.len(),
            got: f.len(),
        });
    }
    let n = space.len();
    let mut labels = space.labels().to_vec();
    labels.push(label.to_string());
    let mut dist: Vec<Vec<Rational>> = space
        .matrix()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut row = row.clone();
            row.push(f.value(i).clone());
            row
        })
        .collect();
    let mut last = f.values().to_vec();
    last.push(Rational::zero());
    dist.push(last);
    debug_assert_eq!(dist.len(), n + 1);
    validate_metric(labels, dist)
}

/// A distance-preserving bijection `a -> b` (`map[i]` is the image of point
/// `i`), found by exhaustive search after a sorted-distance filter.
pub fn find_isometry(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let sorted_all = |s: &FiniteMetricSpace| {
        let mut v: Vec<&Rational> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| s.dist(i, j))
            .collect();
        v.sort();
        v.into_iter().cloned().collect::<Vec<_>>()
    };
    if sorted_all(a) != sorted_all(b) {
        return None;
    }
    let row_profile = |s: &FiniteMetricSpace, i: usize| {
        let mut row = s.matrix()[i].clone();
        row.sort();
        row
    };
    let pa: Vec<_> = (0..n).map(|i| row_profile(a, i)).collect();
    let pb: Vec<_> = (0..n).map(|i| row_profile(b, i)).collect();

    fn search(
        i: usize,
        a: &FiniteMetricSpace,
        b: &FiniteMetricSpace,
        pa: &[Vec<Rational>],
        pb: &[Vec<Rational>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] || pa[i] != pb[j] {
                continue;
            }
            if (0..i).any(|k| a.dist(i, k) != b.dist(j, map[k])) {
                continue;
            }
            used[j] = true;
            map.push(j);
            if search(i + 1, a, b, pa, pb, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }

    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search(0, a, b, &pa, &pb, &mut map, &mut used).then_some(map)
}

/// Indices of the vertices that are not distance cones.
pub fn inner_vertices(complex: &TightSpanComplex) -> Vec<usize> {
    (0..complex.vertices().len())
        .filter(|&i| complex.cone_point(i).is_none())
        .collect()
}
