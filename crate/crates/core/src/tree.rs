//! Tree metrics: recognition, realization as a weighted tree read off the
//! tight span, exact arithmetic on points of the continuum tree, and Newick
//! output.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::extremal::sup_distance;
use crate::metric::{four_point_report, FiniteMetricSpace};
use crate::rational::{abs_diff, format_decimal, int, Rational};
use crate::tightspan::{enumerate_tight_span_bounded, synthetic_labels, DEFAULT_MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub weight: Rational,
}

/// A finite tree with positive exact edge weights.
///
/// Nodes carrying a point of the realized metric keep that point's label;
/// the remaining (branching) nodes carry synthetic labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedTree {
    nodes: Vec<String>,
    edges: Vec<TreeEdge>,
    leaf_map: Vec<(String, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    node_dist: Vec<Vec<Rational>>,
    next_hop: Vec<Vec<usize>>,
}

/// A point of the continuum tree: a node, or a position strictly inside an
/// edge measured from the edge's `a` end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreePoint {
    Node(usize),
    Edge { edge: usize, offset: Rational },
}

impl WeightedTree {
    /// Checks that the edges form a spanning tree with positive weights and
    /// that `leaf_map` names existing nodes.
    pub fn new(nodes: Vec<String>, edges: Vec<TreeEdge>, leaf_map: Vec<(String, usize)>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::MalformedTree("no nodes".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::MalformedTree(format!("{} edges for {} nodes", edges.len(), n)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            if e.a >= n || e.b >= n || e.a == e.b {
                return Err(Error::MalformedTree(format!("bad endpoints on edge {id}")));
            }
            if !e.weight.is_positive() {
                return Err(Error::MalformedTree(format!("non-positive weight on edge {id}")));
            }
            adjacency[e.a].push((e.b, id));
            adjacency[e.b].push((e.a, id));
        }
        for (_, node) in &leaf_map {
            if *node >= n {
                return Err(Error::UnknownNode(*node));
            }
        }
        let mut node_dist = vec![vec![Rational::zero(); n]; n];
        let mut next_hop = vec![vec![usize::MAX; n]; n];
        for src in 0..n {
            let mut seen = vec![false; n];
            seen[src] = true;
            next_hop[src][src] = src;
            let mut queue = VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                for &(y, id) in &adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        node_dist[src][y] = &node_dist[src][x] + &edges[id].weight;
                        next_hop[src][y] = if x == src { y } else { next_hop[src][x] };
                        queue.push_back(y);
                    }
                }
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::MalformedTree("disconnected".into()));
            }
        }
        Ok(Self {
            nodes,
            edges,
            leaf_map,
            adjacency,
            node_dist,
            next_hop,
        })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    /// Original point label to node, in point order.
    pub fn leaf_map(&self) -> &[(String, usize)] {
        &self.leaf_map
    }

    pub fn node_of(&self, label: &str) -> Option<usize> {
        self.leaf_map.iter().find(|(l, _)| l == label).map(|(_, n)| *n)
    }

    pub fn node_by_name(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|l| l == name)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Neighbours of `node` with the connecting edge id.
    pub fn neighbours(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn node_distance(&self, a: usize, b: usize) -> &Rational {
        &self.node_dist[a][b]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency.get(a)?.iter().find(|(y, _)| *y == b).map(|(_, id)| *id)
    }

    /// The point at `offset` from the `a` end of `edge`; the two ends
    /// normalize to node form.
    pub fn edge_point(&self, edge: usize, offset: Rational) -> Result<TreePoint> {
        let e = self.edges.get(edge).ok_or(Error::UnknownEdge(edge))?;
        if offset.is_negative() || offset > e.weight {
            return Err(Error::InvalidOffset(edge));
        }
        Ok(if offset.is_zero() {
            TreePoint::Node(e.a)
        } else if offset == e.weight {
            TreePoint::Node(e.b)
        } else {
            TreePoint::Edge { edge, offset }
        })
    }

    /// Node of an original point, as a tree point.
    pub fn point(&self, label: &str) -> Option<TreePoint> {
        self.node_of(label).map(TreePoint::Node)
    }

    pub fn check_point(&self, p: &TreePoint) -> Result<()> {
        match p {
            TreePoint::Node(n) if *n < self.nodes.len() => Ok(()),
            TreePoint::Node(n) => Err(Error::UnknownNode(*n)),
            TreePoint::Edge { edge, offset } => {
                let e = self.edges.get(*edge).ok_or(Error::UnknownEdge(*edge))?;
                if offset.is_positive() && offset < &e.weight {
                    Ok(())
                } else {
                    Err(Error::InvalidOffset(*edge))
                }
            }
        }
    }

    /// Nodes adjacent to `p` along its edge with the distance to each.
    fn anchors(&self, p: &TreePoint) -> Vec<(usize, Rational)> {
        match p {
            TreePoint::Node(n) => vec![(*n, Rational::zero())],
            TreePoint::Edge { edge, offset } => {
                let e = &self.edges[*edge];
                vec![(e.a, offset.clone()), (e.b, &e.weight - offset)]
            }
        }
    }

    fn distance_unchecked(&self, p: &TreePoint, q: &TreePoint) -> Rational {
        if let (TreePoint::Edge { edge: e1, offset: t1 }, TreePoint::Edge { edge: e2, offset: t2 }) = (p, q) {
            if e1 == e2 {
                return abs_diff(t1, t2);
            }
        }
        let mut best: Option<Rational> = None;
        for (x, dx) in self.anchors(p) {
            for (y, dy) in self.anchors(q) {
                let d = &dx + &self.node_dist[x][y] + &dy;
                if best.as_ref().is_none_or(|b| &d < b) {
                    best = Some(d);
                }
            }
        }
        best.expect("every point has an anchor")
    }

    /// Anchor of `p` on the way to `q`, with the distance to it.
    fn exit_towards(&self, p: &TreePoint, q: &TreePoint) -> (usize, Rational) {
        let anchors = self.anchors(p);
        let mut best = anchors[0].clone();
        let mut best_total = &best.1 + self.distance_unchecked(&TreePoint::Node(best.0), q);
        for (x, dx) in anchors.into_iter().skip(1) {
            let total = &dx + self.distance_unchecked(&TreePoint::Node(x), q);
            if total < best_total {
                best_total = total;
                best = (x, dx);
            }
        }
        best
    }

    /// Point at distance `s` from `from` on the edge through node `node`,
    /// where `from` is a point on that edge (or the node at its other end).
    fn step_on_edge(&self, edge: usize, from_offset: &Rational, towards: usize, s: &Rational) -> TreePoint {
        let e = &self.edges[edge];
        let offset = if towards == e.b {
            from_offset + s
        } else {
            from_offset - s
        };
        self.edge_point(edge, offset).expect("step stays on the edge")
    }

    fn offset_of_node(&self, edge: usize, node: usize) -> Rational {
        let e = &self.edges[edge];
        if node == e.a {
            Rational::zero()
        } else {
            e.weight.clone()
        }
    }

    /// The point on the geodesic from `p` to `q` at distance `s` from `p`,
    /// `0 <= s <= d(p, q)`.
    pub fn point_along(&self, p: &TreePoint, q: &TreePoint, s: &Rational) -> Result<TreePoint> {
        self.check_point(p)?;
        self.check_point(q)?;
        let total = self.distance_unchecked(p, q);
        if s.is_negative() || s > &total {
            return Err(Error::InvalidOffset(usize::MAX));
        }
        if s.is_zero() {
            return Ok(p.clone());
        }
        if s == &total {
            return Ok(q.clone());
        }
        if let (TreePoint::Edge { edge: e1, offset: t1 }, TreePoint::Edge { edge: e2, offset: t2 }) = (p, q) {
            if e1 == e2 {
                let towards = if t2 > t1 { self.edges[*e1].b } else { self.edges[*e1].a };
                return Ok(self.step_on_edge(*e1, t1, towards, s));
            }
        }
        let (exit, d_exit) = self.exit_towards(p, q);
        if let TreePoint::Edge { edge, offset } = p {
            if s <= &d_exit {
                return Ok(self.step_on_edge(*edge, offset, exit, s));
            }
        }
        let (entry, _) = self.exit_towards(q, p);
        let mut travelled = d_exit;
        let mut at = exit;
        while at != entry {
            let next = self.next_hop[at][entry];
            let edge = self.edge_between(at, next).expect("next hop is adjacent");
            let after = &travelled + &self.edges[edge].weight;
            if s <= &after {
                let rest = s - &travelled;
                return Ok(self.step_on_edge(edge, &self.offset_of_node(edge, at), next, &rest));
            }
            travelled = after;
            at = next;
        }
        match q {
            TreePoint::Edge { edge, .. } => {
                let rest = s - &travelled;
                Ok(self.step_on_edge(
                    *edge,
                    &self.offset_of_node(*edge, entry),
                    other_end(&self.edges[*edge], entry),
                    &rest,
                ))
            }
            TreePoint::Node(_) => Ok(q.clone()),
        }
    }
}

fn other_end(e: &TreeEdge, node: usize) -> usize {
    if e.a == node {
        e.b
    } else {
        e.a
    }
}

/// Four-point condition; finite spaces are complete, and realization supplies
/// connectivity.
pub fn is_tree_metric(space: &FiniteMetricSpace) -> bool {
    four_point_report(space).holds
}

pub fn realize_tree(space: &FiniteMetricSpace) -> Result<WeightedTree> {
    realize_tree_bounded(space, DEFAULT_MAX_POINTS)
}

/// Reads the tree off the tight span: vertices become nodes and the
/// 1-skeleton becomes the edge set, weighted by sup distance. Branch-free
/// synthetic nodes are contracted.
///
/// Nodes are numbered with the original points first (in point order), then
/// synthetic nodes `s1, s2, ...` in lexicographic vertex order.
pub fn realize_tree_bounded(space: &FiniteMetricSpace, max_points: usize) -> Result<WeightedTree> {
    let report = four_point_report(space);
    if !report.holds {
        return Err(Error::NotATreeMetric(Box::new(report)));
    }
    let complex = enumerate_tight_span_bounded(space, max_points)?;
    let vertices = complex.vertices();
    let mut adj: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); vertices.len()];
    for &(i, j) in complex.edges() {
        let w = sup_distance(&vertices[i], &vertices[j])?;
        adj[i].insert(j, w.clone());
        adj[j].insert(i, w);
    }
    let mut alive = vec![true; vertices.len()];
    loop {
        let candidate = (0..vertices.len()).find(|&v| alive[v] && complex.cone_point(v).is_none() && adj[v].len() == 2);
        let Some(v) = candidate else { break };
        let mut it = std::mem::take(&mut adj[v]).into_iter();
        let (x, wx) = it.next().expect("degree two");
        let (y, wy) = it.next().expect("degree two");
        adj[x].remove(&v);
        adj[y].remove(&v);
        let w = wx + wy;
        adj[x].insert(y, w.clone());
        adj[y].insert(x, w);
        alive[v] = false;
    }

    let n = space.len();
    let mut node_of_vertex = vec![usize::MAX; vertices.len()];
    for x in 0..n {
        let v = complex.cone_vertex(x).expect("every cone is a vertex");
        node_of_vertex[v] = x;
    }
    let inner: Vec<usize> = (0..vertices.len())
        .filter(|&v| alive[v] && complex.cone_point(v).is_none())
        .collect();
    let mut nodes: Vec<String> = space.labels().to_vec();
    nodes.extend(synthetic_labels(space.labels(), inner.len()));
    for (k, &v) in inner.iter().enumerate() {
        node_of_vertex[v] = n + k;
    }
    let mut edges: Vec<TreeEdge> = Vec::new();
    for (v, nbrs) in adj.iter().enumerate() {
        for (&u, w) in nbrs {
            let (a, b) = (node_of_vertex[v], node_of_vertex[u]);
            if a < b {
                edges.push(TreeEdge {
                    a,
                    b,
                    weight: w.clone(),
                });
            }
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));
    let leaf_map = space.labels().iter().cloned().zip(0..n).collect();
    WeightedTree::new(nodes, edges, leaf_map)
}

pub fn tree_distance(tree: &WeightedTree, p: &TreePoint, q: &TreePoint) -> Result<Rational> {
    tree.check_point(p)?;
    tree.check_point(q)?;
    Ok(tree.distance_unchecked(p, q))
}

/// The unique point on all three pairwise geodesics.
pub fn tree_median(tree: &WeightedTree, p: &TreePoint, q: &TreePoint, r: &TreePoint) -> Result<TreePoint> {
    let pq = tree_distance(tree, p, q)?;
    let pr = tree_distance(tree, p, r)?;
    let qr = tree_distance(tree, q, r)?;
    let from_p = (pq + pr - qr) / int(2);
    tree.point_along(p, q, &from_p)
}

/// A point common to every ball of a pairwise-overlapping family, or `None`
/// when some pair of balls is disjoint.
///
/// Minimizes `phi(p) = max_i (d(p, c_i) - r_i)` over nodes and edge
/// interiors. Along an edge every distance term has slope `+1` or `-1`, so
/// `phi(t) = max(t + A, B - t)` and the minimizer is `(B - A) / 2` clamped
/// to the edge. Nodes are tried first, then edges in order; only strict
/// improvements replace the incumbent.
pub fn tree_ball_intersection(tree: &WeightedTree, family: &[(TreePoint, Rational)]) -> Result<Option<TreePoint>> {
    for (c, r) in family {
        tree.check_point(c)?;
        if r.is_negative() {
            return Err(Error::NegativeRadius(0));
        }
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let d = tree.distance_unchecked(&family[i].0, &family[j].0);
            if d > &family[i].1 + &family[j].1 {
                return Ok(None);
            }
        }
    }
    if family.is_empty() {
        return Ok(Some(TreePoint::Node(0)));
    }
    let phi = |p: &TreePoint| {
        family
            .iter()
            .map(|(c, r)| tree.distance_unchecked(p, c) - r)
            .max()
            .expect("nonempty family")
    };
    let mut best = TreePoint::Node(0);
    let mut best_value = phi(&best);
    for node in 1..tree.nodes.len() {
        let p = TreePoint::Node(node);
        let v = phi(&p);
        if v < best_value {
            best_value = v;
            best = p;
        }
    }
    for (id, e) in tree.edges.iter().enumerate() {
        let mut rising: Option<Rational> = None;
        let mut falling: Option<Rational> = None;
        let push = |slot: &mut Option<Rational>, v: Rational| {
            if slot.as_ref().is_none_or(|s| &v > s) {
                *slot = Some(v);
            }
        };
        for (c, r) in family {
            match c {
                TreePoint::Edge { edge, offset } if *edge == id => {
                    push(&mut rising, -offset - r);
                    push(&mut falling, offset - r);
                }
                _ => {
                    let da = tree.distance_unchecked(&TreePoint::Node(e.a), c);
                    let db = tree.distance_unchecked(&TreePoint::Node(e.b), c);
                    if da < db {
                        push(&mut rising, da - r);
                    } else {
                        push(&mut falling, &e.weight + db - r);
                    }
                }
            }
        }
        let (Some(a), Some(b)) = (rising, falling) else {
            // Monotone along the edge: an end node is at least as good.
            continue;
        };
        let t = (&b - &a) / int(2);
        if !t.is_positive() || t >= e.weight {
            continue;
        }
        let value = (&t + &a).max(&b - &t);
        if value < best_value {
            best_value = value;
            best = TreePoint::Edge { edge: id, offset: t };
        }
    }
    debug_assert!(
        !best_value.is_positive(),
        "pairwise-overlapping balls in a tree must meet"
    );
    Ok(Some(best))
}

/// Rooted Newick text.
///
/// The root is the neighbour of the lexicographically smallest leaf, or that
/// leaf itself when the tree has at most two nodes. Children are ordered by
/// the smallest point label below them; synthetic node names are omitted;
/// branch lengths are exact decimals or `p/q`.
pub fn to_newick(tree: &WeightedTree) -> String {
    let labelled: Vec<Option<&str>> = {
        let mut v = vec![None; tree.nodes.len()];
        for (label, node) in &tree.leaf_map {
            v[*node] = Some(label.as_str());
        }
        v
    };
    let smallest_leaf = (0..tree.nodes.len())
        .filter(|&x| tree.degree(x) <= 1)
        .min_by(|&x, &y| tree.nodes[x].cmp(&tree.nodes[y]))
        .expect("a finite tree has a leaf");
    let root = if tree.nodes.len() <= 2 {
        smallest_leaf
    } else {
        tree.adjacency[smallest_leaf][0].0
    };

    fn min_label<'a>(tree: &'a WeightedTree, labelled: &[Option<&'a str>], x: usize, parent: usize) -> Option<&'a str> {
        let below = tree.adjacency[x]
            .iter()
            .filter(|(y, _)| *y != parent)
            .filter_map(|(y, _)| min_label(tree, labelled, *y, x));
        labelled[x].into_iter().chain(below).min()
    }

    fn emit(tree: &WeightedTree, labelled: &[Option<&str>], x: usize, parent: usize, out: &mut String) {
        let mut children: Vec<(Option<&str>, usize, usize)> = tree.adjacency[x]
            .iter()
            .filter(|(y, _)| *y != parent)
            .map(|&(y, id)| (min_label(tree, labelled, y, x), y, id))
            .collect();
        children.sort();
        if !children.is_empty() {
            out.push('(');
            for (k, (_, y, id)) in children.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                emit(tree, labelled, *y, x, out);
                out.push(':');
                out.push_str(&format_decimal(&tree.edges[*id].weight));
            }
            out.push(')');
        }
        if let Some(label) = labelled[x] {
            out.push_str(&newick_label(label));
        }
    }

    let mut out = String::new();
    emit(tree, &labelled, root, usize::MAX, &mut out);
    out.push(';');
    out
}

fn newick_label(label: &str) -> String {
    if label.chars().any(|c| c.is_whitespace() || "(),:;[]'".contains(c)) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}
