//! Shared generators and independent oracles for the integration suites.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use mtk::rational::{int, ratio};
use mtk::{validate_metric, FiniteMetricSpace, Rational};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Rational in `[lo, hi]` with a denominator between 1 and 4.
pub fn rational_in(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    let q = rng.random_range(1..=4i64);
    ratio(rng.random_range(lo * q..=hi * q), q)
}

/// Shortest-path closure of random positive edge lengths on the complete graph.
pub fn random_metric(rng: &mut impl Rng, n: usize) -> FiniteMetricSpace {
    let mut d = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = rational_in(rng, 1, 10);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    floyd_warshall(&mut d);
    validate_metric(labels("x", n), d).expect("closure is a metric")
}

pub fn floyd_warshall(d: &mut [Vec<Rational>]) {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
}

/// Edges `(a, b, w)` of a random weighted tree on `nodes` nodes, every node
/// after the first hung from an earlier one.
pub fn random_tree_edges(rng: &mut impl Rng, nodes: usize) -> Vec<(usize, usize, Rational)> {
    (1..nodes)
        .map(|i| (rng.random_range(0..i), i, rational_in(rng, 1, 10)))
        .collect()
}

pub fn tree_node_distances(nodes: usize, edges: &[(usize, usize, Rational)]) -> Vec<Vec<Rational>> {
    let mut adj = vec![Vec::new(); nodes];
    for (a, b, w) in edges {
        adj[*a].push((*b, w.clone()));
        adj[*b].push((*a, w.clone()));
    }
    (0..nodes)
        .map(|s| {
            let mut dist: Vec<Option<Rational>> = vec![None; nodes];
            dist[s] = Some(Rational::zero());
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let du = dist[u].clone().expect("visited");
                for (v, w) in &adj[u] {
                    if dist[*v].is_none() {
                        dist[*v] = Some(&du + w);
                        stack.push(*v);
                    }
                }
            }
            dist.into_iter().map(|d| d.expect("connected")).collect()
        })
        .collect()
}

/// A tree metric on `n` points: the leaves of a random tree plus random
/// internal nodes until `n` points are chosen.
pub fn random_tree_metric(rng: &mut impl Rng, n: usize) -> FiniteMetricSpace {
    loop {
        let nodes = rng.random_range(n..=2 * n);
        let edges = random_tree_edges(rng, nodes);
        let mut degree = vec![0usize; nodes];
        for (a, b, _) in &edges {
            degree[*a] += 1;
            degree[*b] += 1;
        }
        let mut chosen: Vec<usize> = (0..nodes).filter(|&v| degree[v] <= 1).collect();
        if chosen.len() > n {
            continue;
        }
        let mut rest: Vec<usize> = (0..nodes).filter(|&v| degree[v] > 1).collect();
        while chosen.len() < n {
            let k = rng.random_range(0..rest.len());
            chosen.push(rest.swap_remove(k));
        }
        chosen.sort();
        let all = tree_node_distances(nodes, &edges);
        let d = chosen
            .iter()
            .map(|&i| chosen.iter().map(|&j| all[i][j].clone()).collect())
            .collect();
        return validate_metric(labels("t", n), d).expect("tree distances form a metric");
    }
}

/// A tree metric with every entry nudged by a small random amount and the
/// result closed under shortest paths.
pub fn perturbed_metric(rng: &mut impl Rng, n: usize) -> FiniteMetricSpace {
    let base = random_tree_metric(rng, n);
    let mut d: Vec<Vec<Rational>> = base.matrix().to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            let nudge = ratio(rng.random_range(-2..=2), 4);
            let v = (&d[i][j] + nudge).max(ratio(1, 4));
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    floyd_warshall(&mut d);
    validate_metric(labels("x", n), d).expect("closure is a metric")
}

/// Radii making every pair of balls overlap: random starting radii, then
/// each short pair is repaired by growing its second ball.
pub fn overlapping_radii(rng: &mut impl Rng, space: &FiniteMetricSpace, centers: &[usize]) -> Vec<Rational> {
    let max = space
        .matrix()
        .iter()
        .flatten()
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero);
    let mut r: Vec<Rational> = centers
        .iter()
        .map(|_| &max * ratio(rng.random_range(0..=8), 8))
        .collect();
    for i in 0..centers.len() {
        for j in 0..centers.len() {
            let need = space.dist(centers[i], centers[j]) - &r[i];
            if r[j] < need {
                r[j] = need;
            }
        }
    }
    r
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &rows[r][c];
                for k in c..cols {
                    let sub = &factor * &rows[r][k];
                    rows[i][k] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// Solves a square system; `None` when singular.
pub fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let pivot = a[c][c].clone();
        for k in c..n {
            a[c][k] = &a[c][k] / &pivot;
        }
        b[c] = &b[c] / &pivot;
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for k in c..n {
                    let sub = &factor * &a[c][k];
                    a[i][k] -= sub;
                }
                let sub = &factor * &b[c];
                b[i] -= sub;
            }
        }
    }
    Some(b)
}

fn pairs_with_loops(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn constraint_row(n: usize, (i, j): (usize, usize)) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); n];
    row[i] += Rational::one();
    row[j] += Rational::one();
    row
}

pub fn admissible(space: &FiniteMetricSpace, f: &[Rational]) -> bool {
    pairs_with_loops(space.len())
        .into_iter()
        .all(|(i, j)| &f[i] + &f[j] >= *space.dist(i, j))
}

pub fn minimal(space: &FiniteMetricSpace, f: &[Rational]) -> bool {
    let n = space.len();
    (0..n).all(|x| (0..n).any(|y| &f[x] + &f[y] == *space.dist(x, y)))
}

/// Every basic feasible solution of `f(x) + f(y) >= d(x, y)`: each choice of
/// `n` constraints made tight, solved, and kept when feasible.
pub fn brute_force_vertices(space: &FiniteMetricSpace) -> BTreeSet<Vec<Rational>> {
    let n = space.len();
    let pairs = pairs_with_loops(n);
    let mut out = BTreeSet::new();
    let mut pick = Vec::with_capacity(n);
    fn rec(
        start: usize,
        pairs: &[(usize, usize)],
        pick: &mut Vec<usize>,
        space: &FiniteMetricSpace,
        out: &mut BTreeSet<Vec<Rational>>,
    ) {
        let n = space.len();
        if pick.len() == n {
            let a = pick.iter().map(|&k| constraint_row(n, pairs[k])).collect();
            let b = pick
                .iter()
                .map(|&k| space.dist(pairs[k].0, pairs[k].1).clone())
                .collect();
            if let Some(f) = solve(a, b) {
                if admissible(space, &f) {
                    out.insert(f);
                }
            }
            return;
        }
        for k in start..pairs.len() {
            pick.push(k);
            rec(k + 1, pairs, pick, space, out);
            pick.pop();
        }
    }
    rec(0, &pairs, &mut pick, space, &mut out);
    out
}

/// `n` minus the rank of the constraints tight at `f`.
pub fn face_dimension(space: &FiniteMetricSpace, f: &[Rational]) -> usize {
    let n = space.len();
    let tight: Vec<Vec<Rational>> = pairs_with_loops(n)
        .into_iter()
        .filter(|&(i, j)| &f[i] + &f[j] == *space.dist(i, j))
        .map(|p| constraint_row(n, p))
        .collect();
    n - rank(tight)
}

/// Largest face dimension found at centroids of vertex subsets of size up to
/// `max_subset`, among the centroids lying in the hull.
pub fn brute_force_dimension(space: &FiniteMetricSpace, vertices: &[Vec<Rational>], max_subset: usize) -> usize {
    let mut best = 0;
    let mut pick = Vec::new();
    fn rec(
        start: usize,
        vertices: &[Vec<Rational>],
        pick: &mut Vec<usize>,
        max_subset: usize,
        space: &FiniteMetricSpace,
        best: &mut usize,
    ) {
        if !pick.is_empty() {
            let n = space.len();
            let k = Rational::from_integer((pick.len() as i64).into());
            let c: Vec<Rational> = (0..n)
                .map(|x| pick.iter().map(|&v| vertices[v][x].clone()).sum::<Rational>() / &k)
                .collect();
            if minimal(space, &c) {
                *best = (*best).max(face_dimension(space, &c));
            }
        }
        if pick.len() == max_subset {
            return;
        }
        for v in start..vertices.len() {
            pick.push(v);
            rec(v + 1, vertices, pick, max_subset, space, best);
            pick.pop();
        }
    }
    rec(0, vertices, &mut pick, max_subset, space, &mut best);
    best
}

/// Exhaustive search for a distance-preserving bijection between two
/// distance matrices.
pub fn isometric(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    fn extend(a: &[Vec<Rational>], b: &[Vec<Rational>], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || (0..i).any(|k| a[i][k] != b[j][map[k]]) {
                continue;
            }
            used[j] = true;
            map.push(j);
            if extend(a, b, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut Vec::new(), &mut vec![false; b.len()])
}

/// Pythagorean points with a rational scale, so every Euclidean norm is
/// rational.
pub fn pythagorean_point(rng: &mut impl Rng) -> (Rational, Rational) {
    const TRIPLES: [(i64, i64); 6] = [(3, 4), (5, 12), (8, 15), (7, 24), (1, 0), (20, 21)];
    let (mut x, mut y) = TRIPLES[rng.random_range(0..TRIPLES.len())];
    if rng.random_bool(0.5) {
        std::mem::swap(&mut x, &mut y);
    }
    if rng.random_bool(0.5) {
        x = -x;
    }
    if rng.random_bool(0.5) {
        y = -y;
    }
    let scale = ratio(rng.random_range(1..=6), rng.random_range(1..=3));
    (int(x) * &scale, int(y) * scale)
}

/// Leaf-to-leaf distances of a Newick string, read without the library.
///
/// Handles nested groups, bare or single-quoted labels, `:length` with
/// integers, decimals or `p/q`, and a named root.
pub fn newick_distances(text: &str) -> HashMap<(String, String), Rational> {
    struct Reader<'a> {
        s: &'a [u8],
        pos: usize,
        names: Vec<Option<String>>,
        edges: Vec<(usize, usize, Rational)>,
    }
    impl Reader<'_> {
        fn peek(&self) -> u8 {
            self.s[self.pos]
        }
        fn node(&mut self) -> usize {
            let id = self.names.len();
            self.names.push(None);
            if self.peek() == b'(' {
                self.pos += 1;
                loop {
                    let child = self.node();
                    let len = self.length();
                    self.edges.push((id, child, len));
                    match self.peek() {
                        b',' => self.pos += 1,
                        b')' => {
                            self.pos += 1;
                            break;
                        }
                        c => panic!("unexpected {:?} in newick", c as char),
                    }
                }
            }
            self.names[id] = self.label();
            id
        }
        fn label(&mut self) -> Option<String> {
            if self.peek() == b'\'' {
                self.pos += 1;
                let mut out = String::new();
                loop {
                    let c = self.peek();
                    self.pos += 1;
                    if c == b'\'' {
                        if self.peek() == b'\'' {
                            self.pos += 1;
                            out.push('\'');
                            continue;
                        }
                        return Some(out);
                    }
                    out.push(c as char);
                }
            }
            let start = self.pos;
            while !b":,();".contains(&self.peek()) {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.s[start..self.pos]).expect("utf-8");
            (!name.is_empty()).then(|| name.to_string())
        }
        fn length(&mut self) -> Rational {
            assert_eq!(self.peek(), b':', "every non-root node carries a length");
            self.pos += 1;
            let start = self.pos;
            while !b",);".contains(&self.peek()) {
                self.pos += 1;
            }
            number(std::str::from_utf8(&self.s[start..self.pos]).expect("utf-8"))
        }
    }
    fn number(t: &str) -> Rational {
        if let Some((p, q)) = t.split_once('/') {
            return Rational::new(p.parse().expect("integer"), q.parse().expect("integer"));
        }
        match t.split_once('.') {
            Some((w, f)) => {
                let den = num_traits::pow(num_bigint::BigInt::from(10), f.len());
                let sign = if w.starts_with('-') { -1 } else { 1 };
                let whole: num_bigint::BigInt = w.trim_start_matches('-').parse().unwrap_or_default();
                let frac: num_bigint::BigInt = f.parse().expect("digits");
                Rational::new((whole * &den + frac) * sign, den)
            }
            None => Rational::from_integer(t.parse().expect("integer")),
        }
    }

    let mut r = Reader {
        s: text.trim().as_bytes(),
        pos: 0,
        names: Vec::new(),
        edges: Vec::new(),
    };
    r.node();
    assert_eq!(r.peek(), b';');
    let m = r.names.len();
    let edges: Vec<(usize, usize, Rational)> = r.edges.clone();
    let dist = tree_node_distances(m, &edges);
    let mut out = HashMap::new();
    for i in 0..m {
        for j in 0..m {
            if let (Some(a), Some(b)) = (&r.names[i], &r.names[j]) {
                out.insert((a.clone(), b.clone()), dist[i][j].clone());
            }
        }
    }
    out
}
