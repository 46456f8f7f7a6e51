//! Exact computations on finite metric spaces.
//!
//! * [`metric`]: validated spaces, four-point reports, metric intervals,
//!   medians, and finite ball-intersection checks.
//! * [`extremal`]: extremal functions, distance cones and minimization.
//! * [`tightspan`]: the tight span (injective hull) as a polyhedral complex.
//! * [`tree`]: tree metrics realized as weighted trees; Newick output.
//! * [`linking`]: gluing spaces at link points; river and radial metrics.
//! * [`extension`]: extensions with a prescribed modulus of continuity.
//! * [`io`] and [`cli`]: file formats and the `mtk` command line.
//!
//! All arithmetic is over arbitrary-precision rationals.

pub mod cli;
pub mod error;
pub mod extension;
pub mod extremal;
pub mod fixtures;
pub mod io;
pub mod linking;
pub mod metric;
pub mod rational;
pub mod tightspan;
pub mod tree;

pub use error::{Error, Result};
pub use extension::{
    extend_into_tree, extend_with_modulus, lipschitz_constant_of, modulus_check, MapValues, Modulus, ModulusReport,
    PartialMap,
};
pub use extremal::{
    distance_cone, extend_ball_family, is_admissible, is_minimal, minimize_to_extremal, sup_distance, ExtremalFunction,
};
pub use linking::{glue_spaces, radial_metric, river_metric, Component, LinkSpec, RadialNorm};
pub use metric::{
    binary_ball_intersection_check, four_point_report, median_points, metric_interval, validate_metric, Ball,
    BallCheck, BallFamily, FiniteMetricSpace, FourPointReport,
};
pub use rational::Rational;
pub use tightspan::{
    ball_intersection_witness, embed_point, enumerate_tight_span, membership, vertex_metric_space, TightSpanComplex,
};
pub use tree::{
    is_tree_metric, realize_tree, to_newick, tree_ball_intersection, tree_distance, tree_median, TreeEdge, TreePoint,
    WeightedTree,
};
