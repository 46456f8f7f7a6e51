//! Small named spaces used throughout the docs and tests.

use crate::metric::{validate_metric, FiniteMetricSpace};
use crate::rational::int;

/// Builds a space from labels and an integer upper triangle (row-major,
/// excluding the diagonal). Panics on invalid input.
pub fn from_upper(labels: &[&str], upper: &[i64]) -> FiniteMetricSpace {
    let n = labels.len();
    assert_eq!(upper.len(), n * (n.saturating_sub(1)) / 2);
    let mut m = vec![vec![int(0); n]; n];
    let mut it = upper.iter();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = int(*it.next().unwrap());
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    validate_metric(labels.iter().map(|s| s.to_string()).collect(), m).expect("fixture must be a metric")
}

pub fn two_point() -> FiniteMetricSpace {
    from_upper(&["a", "b"], &[1])
}

/// `d(a,b)=3, d(a,c)=5, d(b,c)=4`.
pub fn space_a() -> FiniteMetricSpace {
    from_upper(&["a", "b", "c"], &[3, 5, 4])
}

/// Path `a - z - b` with unit steps; labels in the order `a, z, b`.
pub fn p3() -> FiniteMetricSpace {
    from_upper(&["a", "z", "b"], &[1, 2, 1])
}

/// Four-cycle `a, b, c, d`: adjacent 1, opposite 2.
pub fn c4() -> FiniteMetricSpace {
    from_upper(&["a", "b", "c", "d"], &[1, 2, 1, 1, 2, 1])
}

/// Quartet tree metric: cherries `{a,b}` and `{c,d}`, all cross distances 3.
pub fn quartet() -> FiniteMetricSpace {
    from_upper(&["a", "b", "c", "d"], &[2, 3, 3, 3, 3, 2])
}

/// Node set of the unit-edge quartet tree: leaves `a..d`, internal `p`
/// (joining a, b) and `q` (joining c, d).
pub fn quartet_nodes() -> FiniteMetricSpace {
    from_upper(
        &["a", "b", "c", "d", "p", "q"],
        &[
            2, 3, 3, 1, 2, //
            3, 3, 1, 2, //
            2, 2, 1, //
            2, 1, //
            1,
        ],
    )
}

/// A non-tree metric whose triple `(a, c, d)` has no median.
pub fn metric_b() -> FiniteMetricSpace {
    from_upper(&["a", "b", "c", "d"], &[2, 2, 3, 3, 2, 2])
}
