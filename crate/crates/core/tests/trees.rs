mod common;

use common::*;
use mtk::rational::{int, ratio};
use mtk::*;
use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

fn random_tree(seed: u64) -> WeightedTree {
    let mut r = rng(seed);
    let nodes = r.random_range(1..=7);
    let edges = random_tree_edges(&mut r, nodes)
        .into_iter()
        .map(|(a, b, weight)| TreeEdge { a, b, weight })
        .collect();
    WeightedTree::new(labels("n", nodes), edges, Vec::new()).unwrap()
}

fn random_point(r: &mut impl Rng, tree: &WeightedTree) -> TreePoint {
    if tree.edges().is_empty() || r.random_bool(0.5) {
        return TreePoint::Node(r.random_range(0..tree.nodes().len()));
    }
    let e = r.random_range(0..tree.edges().len());
    let offset = &tree.edges()[e].weight * ratio(r.random_range(1..=7), 8);
    tree.edge_point(e, offset).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intervals_are_tree_paths(seed in any::<u64>(), n in 2usize..8) {
        let space = random_tree_metric(&mut rng(seed), n);
        let tree = realize_tree(&space).unwrap();
        let at = |i: usize| tree.point(space.label(i)).unwrap();
        let d = |p: &TreePoint, q: &TreePoint| tree_distance(&tree, p, q).unwrap();
        for x in 0..n {
            for y in 0..n {
                let on_path: Vec<usize> =
                    (0..n).filter(|&z| d(&at(x), &at(z)) + d(&at(z), &at(y)) == d(&at(x), &at(y))).collect();
                let interval = metric_interval(&space, x, y).unwrap();
                prop_assert_eq!(&interval, &on_path);
                let mut from_x: Vec<Rational> = interval.iter().map(|&z| space.dist(x, z).clone()).collect();
                from_x.sort();
                from_x.dedup();
                prop_assert_eq!(from_x.len(), interval.len());
            }
        }
    }

    #[test]
    fn tree_medians_are_symmetric_and_central(seed in any::<u64>()) {
        let tree = random_tree(seed);
        let mut r = rng(seed ^ 0x3ed);
        let p: Vec<TreePoint> = (0..3).map(|_| random_point(&mut r, &tree)).collect();
        let m = tree_median(&tree, &p[0], &p[1], &p[2]).unwrap();
        for (a, b, c) in [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
            prop_assert_eq!(&tree_median(&tree, &p[a], &p[b], &p[c]).unwrap(), &m);
        }
        let d = |x: &TreePoint, y: &TreePoint| tree_distance(&tree, x, y).unwrap();
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            prop_assert_eq!(d(&p[a], &m) + d(&m, &p[b]), d(&p[a], &p[b]));
        }
    }

    #[test]
    fn helly_in_trees(seed in any::<u64>(), size in 1usize..6) {
        let tree = random_tree(seed);
        let mut r = rng(seed ^ 0x4e1);
        let centers: Vec<TreePoint> = (0..size).map(|_| random_point(&mut r, &tree)).collect();
        let mut radii: Vec<Rational> = (0..size).map(|_| ratio(r.random_range(0..=12), 4)).collect();
        for i in 0..size {
            for j in 0..size {
                let need = tree_distance(&tree, &centers[i], &centers[j]).unwrap() - &radii[i];
                if radii[j] < need {
                    radii[j] = need;
                }
            }
        }
        let family: Vec<(TreePoint, Rational)> = centers.into_iter().zip(radii).collect();
        let w = tree_ball_intersection(&tree, &family).unwrap().expect("overlapping balls meet in a tree");
        for (c, rad) in &family {
            prop_assert!(&tree_distance(&tree, c, &w).unwrap() <= rad);
        }
    }

    #[test]
    fn radial_is_a_glued_star_of_rays(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let mut pts: Vec<(Rational, Rational)> = Vec::new();
        while pts.len() < n {
            let p = pythagorean_point(&mut r);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let names = labels("p", n);
        let radial = radial_metric(&pts, &names, RadialNorm::Euclidean).unwrap();
        let norm = |i: usize| mtk::rational::rational_sqrt(&(&pts[i].0 * &pts[i].0 + &pts[i].1 * &pts[i].1)).unwrap();

        // One path component per ray, its link point sitting at the origin.
        let mut rays: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let same = |j: usize| {
                let cross = &pts[i].0 * &pts[j].1 - &pts[j].0 * &pts[i].1;
                let dot = &pts[i].0 * &pts[j].0 + &pts[i].1 * &pts[j].1;
                cross == int(0) && dot.is_positive()
            };
            match rays.iter_mut().find(|ray| same(ray[0])) {
                Some(ray) => ray.push(i),
                None => rays.push(vec![i]),
            }
        }
        let base = validate_metric(vec!["origin".into()], vec![vec![int(0)]]).unwrap();
        let components = rays
            .iter()
            .map(|ray| {
                let mut pos = vec![int(0)];
                pos.extend(ray.iter().map(|&i| norm(i)));
                let mut lbl = vec!["link".to_string()];
                lbl.extend(ray.iter().map(|&i| names[i].clone()));
                let m = pos.iter().map(|a| pos.iter().map(|b| (a - b).abs()).collect()).collect();
                Component { space: validate_metric(lbl, m).unwrap(), link: 0, anchor: 0 }
            })
            .collect();
        let glued = glue_spaces(&LinkSpec { base, components }).unwrap();
        for i in 0..n {
            for j in 0..n {
                let (gi, gj) = (glued.index_of(&names[i]).unwrap(), glued.index_of(&names[j]).unwrap());
                prop_assert_eq!(glued.dist(gi, gj), radial.dist(i, j));
            }
        }
    }

    #[test]
    fn taxicab_radial_and_river_are_trees(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let mut pts: Vec<(Rational, Rational)> = Vec::new();
        while pts.len() < n {
            let p = (rational_in(&mut r, -4, 4), rational_in(&mut r, -4, 4));
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        for space in [
            radial_metric(&pts, &labels("p", n), RadialNorm::Taxicab).unwrap(),
            river_metric(&pts, &labels("p", n)).unwrap(),
        ] {
            prop_assert!(four_point_report(&space).holds);
            let tree = realize_tree(&space).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let d = tree_distance(&tree, &tree.point(space.label(i)).unwrap(), &tree.point(space.label(j)).unwrap());
                    prop_assert_eq!(&d.unwrap(), space.dist(i, j));
                }
            }
        }
    }
}

#[test]
fn newick_reader_agrees_on_fixtures() {
    for space in [
        mtk::fixtures::space_a(),
        mtk::fixtures::quartet(),
        mtk::fixtures::p3(),
        mtk::fixtures::two_point(),
    ] {
        let newick = to_newick(&realize_tree(&space).unwrap());
        let parsed = newick_distances(&newick);
        for i in 0..space.len() {
            for j in 0..space.len() {
                let key = (space.label(i).to_string(), space.label(j).to_string());
                assert_eq!(parsed.get(&key), Some(space.dist(i, j)), "{newick}");
            }
        }
    }
    let odd = validate_metric(
        vec!["a b".into(), "it's".into(), "c".into()],
        vec![
            vec![int(0), ratio(1, 3), ratio(3, 4)],
            vec![ratio(1, 3), int(0), ratio(3, 4)],
            vec![ratio(3, 4), ratio(3, 4), int(0)],
        ],
    )
    .unwrap();
    let newick = to_newick(&realize_tree(&odd).unwrap());
    let parsed = newick_distances(&newick);
    assert_eq!(
        parsed[&("a b".to_string(), "it's".to_string())],
        ratio(1, 3),
        "{newick}"
    );
    assert_eq!(parsed[&("c".to_string(), "it's".to_string())], ratio(3, 4), "{newick}");
}
