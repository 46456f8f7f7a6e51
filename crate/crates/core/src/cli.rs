//! The `mtk` command line. Exit status: 0 on success, 1 on domain errors
//! (invalid metric, not a tree metric, disjoint balls, ...), 2 on parse and
//! usage errors.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::extension::{extend_with_modulus, Modulus, PartialMap};
use crate::io::{
    detect_matrix_kind, parse_distance_input_with, parse_points_csv, parse_value_table, rational_strings,
    tight_span_json, tree_to_dot, write_matrix_csv, InputKind, SCHEMA_VERSION,
};
use crate::linking::{glue_spaces, radial_metric, river_metric, Component, LinkSpec, RadialNorm};
use crate::metric::{binary_ball_intersection_check, four_point_report, BallFamily, FiniteMetricSpace};
use crate::rational::{format_rational, parse_rational};
use crate::tightspan::{ball_intersection_witness, enumerate_tight_span_bounded, DEFAULT_MAX_POINTS};
use crate::tree::{realize_tree_bounded, to_newick};

/// Environment variable overriding the enumeration bound.
pub const MAX_POINTS_ENV: &str = "MTK_MAX_POINTS";

#[derive(Parser, Debug)]
#[command(name = "mtk", version, about = "Exact tools for finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the metric axioms.
    Validate(MatrixInput),
    /// Four-point condition report.
    Fourpoint(MatrixInput),
    /// Tight span vertices, dimension and 1-skeleton as JSON.
    Tightspan(MatrixInput),
    /// Realize a tree metric as a weighted tree.
    Tree {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long, value_enum, default_value_t = TreeFormat::Newick)]
        emit: TreeFormat,
    },
    /// Hull point inside every ball of a pairwise-overlapping family.
    Witness {
        #[command(flatten)]
        input: MatrixInput,
        /// A ball as LABEL=RADIUS; repeatable.
        #[arg(long = "ball", required = true)]
        balls: Vec<String>,
    },
    /// Link component spaces onto a base space.
    Glue {
        /// Base space file.
        #[arg(long)]
        base: PathBuf,
        /// A component as PATH:LINK_LABEL:ANCHOR_LABEL; repeatable.
        #[arg(long = "component")]
        components: Vec<String>,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Auto)]
        format: MatrixFormat,
    },
    /// River metric on a CSV of label,x,y.
    River {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Radial metric on a CSV of label,x,y.
    Radial {
        #[arg(long = "in")]
        input: PathBuf,
        /// Measure with |x| + |y| instead of the Euclidean norm.
        #[arg(long)]
        taxicab: bool,
    },
    /// Extend a map given on some points to the whole space.
    Extend {
        #[command(flatten)]
        input: MatrixInput,
        /// CSV of label,v1,...,vk for the mapped points.
        #[arg(long)]
        values: PathBuf,
        /// Lipschitz constant L, i.e. omega(t) = L t.
        #[arg(long, conflicts_with = "modulus", required_unless_present = "modulus")]
        lipschitz: Option<String>,
        /// Modulus pieces as "a:b;a:b" for omega(t) = min(a t + b).
        #[arg(long)]
        modulus: Option<String>,
    },
}

#[derive(Args, Debug)]
struct MatrixInput {
    /// Input file, or - for standard input.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = MatrixFormat::Auto)]
    format: MatrixFormat,
    /// Collapse points at distance zero onto the first of them.
    #[arg(long)]
    merge_duplicates: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MatrixFormat {
    Auto,
    Csv,
    Phylip,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum TreeFormat {
    Newick,
    Dot,
    Both,
}

enum Failure {
    Domain(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Context<'a> {
    stdin: &'a mut dyn Read,
    max_points: usize,
}

impl Context<'_> {
    fn read(&mut self, path: &PathBuf) -> Result<String, Failure> {
        if path.as_os_str() == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s)?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
    }

    fn matrix(&mut self, path: &PathBuf, format: MatrixFormat, merge: bool) -> Result<FiniteMetricSpace, Failure> {
        let text = self.read(path)?;
        let kind = match format {
            MatrixFormat::Auto => detect_matrix_kind(&text),
            MatrixFormat::Csv => InputKind::MatrixCsv,
            MatrixFormat::Phylip => InputKind::MatrixPhylip,
        };
        Ok(parse_distance_input_with(&text, kind, merge)?)
    }

    fn space(&mut self, input: &MatrixInput) -> Result<FiniteMetricSpace, Failure> {
        self.matrix(&input.input, input.format, input.merge_duplicates)
    }
}

/// Enumeration bound from `MTK_MAX_POINTS`, defaulting to 10.
pub fn max_points_from_env() -> usize {
    std::env::var(MAX_POINTS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_POINTS)
}

/// Runs one invocation. `args` includes the program name.
pub fn run_command<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Context {
        stdin,
        max_points: max_points_from_env(),
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "mtk: {e}");
                2
            }
        },
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "mtk: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "mtk: {msg}");
            2
        }
    }
}

fn json_line<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string(doc).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ValidateDoc {
    valid: bool,
    labels: Vec<String>,
}

#[derive(Serialize)]
struct FourPointDoc {
    holds: bool,
    excess: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    worst_quadruple: Option<Vec<String>>,
}

#[derive(Serialize)]
struct WitnessDoc {
    v: u32,
    labels: Vec<String>,
    values: Vec<String>,
    pairwise_ok: bool,
    node_witness: Option<String>,
}

#[derive(Serialize)]
struct ExtendDoc {
    v: u32,
    labels: Vec<String>,
    values: Vec<Vec<String>>,
}

fn label_index(space: &FiniteMetricSpace, label: &str) -> Result<usize, Failure> {
    space
        .index_of(label)
        .ok_or_else(|| Failure::Input(format!("unknown label {label:?}")))
}

fn dispatch(command: Command, ctx: &mut Context) -> Result<String, Failure> {
    match command {
        Command::Validate(input) => {
            let space = ctx.space(&input)?;
            Ok(json_line(&ValidateDoc {
                valid: true,
                labels: space.labels().to_vec(),
            }))
        }
        Command::Fourpoint(input) => {
            let space = ctx.space(&input)?;
            let r = four_point_report(&space);
            Ok(json_line(&FourPointDoc {
                holds: r.holds,
                excess: format_rational(&r.excess),
                worst_quadruple: (!r.holds)
                    .then(|| r.worst_quadruple.iter().map(|&i| space.label(i).to_string()).collect()),
            }))
        }
        Command::Tightspan(input) => {
            let space = ctx.space(&input)?;
            let complex = enumerate_tight_span_bounded(&space, ctx.max_points)?;
            Ok(tight_span_json(&complex) + "\n")
        }
        Command::Tree { input, emit } => {
            let space = ctx.space(&input)?;
            let tree = realize_tree_bounded(&space, ctx.max_points).map_err(|e| match e {
                Error::NotATreeMetric(r) => {
                    let quad: Vec<&str> = r.worst_quadruple.iter().map(|&i| space.label(i)).collect();
                    Failure::Domain(format!(
                        "not a tree metric: four-point condition fails by {} at ({})",
                        format_rational(&r.excess),
                        quad.join(", ")
                    ))
                }
                other => other.into(),
            })?;
            let mut text = String::new();
            if emit != TreeFormat::Dot {
                text.push_str(&to_newick(&tree));
                text.push('\n');
            }
            if emit != TreeFormat::Newick {
                text.push_str(&tree_to_dot(&tree));
            }
            Ok(text)
        }
        Command::Witness { input, balls } => {
            let space = ctx.space(&input)?;
            let mut pairs = Vec::new();
            for spec in &balls {
                let (label, radius) = spec
                    .split_once('=')
                    .ok_or_else(|| Failure::Input(format!("ball {spec:?} is not LABEL=RADIUS")))?;
                let radius = parse_rational(radius).map_err(Failure::Input)?;
                pairs.push((label_index(&space, label)?, radius));
            }
            let family = BallFamily::from_pairs(&space, pairs)?;
            let witness = ball_intersection_witness(&space, &family)?;
            let check = binary_ball_intersection_check(&space, &family);
            Ok(json_line(&WitnessDoc {
                v: SCHEMA_VERSION,
                labels: space.labels().to_vec(),
                values: rational_strings(witness.values()),
                pairwise_ok: check.pairwise_ok,
                node_witness: check.witness.map(|i| space.label(i).to_string()),
            }))
        }
        Command::Glue {
            base,
            components,
            format,
        } => {
            let base = ctx.matrix(&base, format, false)?;
            let mut parts = Vec::new();
            for spec in &components {
                let mut it = spec.rsplitn(3, ':');
                let (Some(anchor), Some(link), Some(path)) = (it.next(), it.next(), it.next()) else {
                    return Err(Failure::Input(format!("component {spec:?} is not PATH:LINK:ANCHOR")));
                };
                let space = ctx.matrix(&PathBuf::from(path), format, false)?;
                let link = label_index(&space, link)?;
                let anchor = label_index(&base, anchor)?;
                parts.push(Component { space, link, anchor });
            }
            let glued = glue_spaces(&LinkSpec {
                base,
                components: parts,
            })?;
            Ok(write_matrix_csv(&glued))
        }
        Command::River { input } => {
            let text = ctx.read(&input)?;
            let (labels, points) = parse_points_csv(&text)?;
            Ok(write_matrix_csv(&river_metric(&points, &labels)?))
        }
        Command::Radial { input, taxicab } => {
            let text = ctx.read(&input)?;
            let (labels, points) = parse_points_csv(&text)?;
            let norm = if taxicab {
                RadialNorm::Taxicab
            } else {
                RadialNorm::Euclidean
            };
            Ok(write_matrix_csv(&radial_metric(&points, &labels, norm)?))
        }
        Command::Extend {
            input,
            values,
            lipschitz,
            modulus,
        } => {
            let space = ctx.space(&input)?;
            let table_text = ctx.read(&values)?;
            let table = parse_value_table(&table_text)?;
            let modulus = match (lipschitz, modulus) {
                (Some(l), _) => Modulus::lipschitz(parse_rational(&l).map_err(Failure::Input)?)?,
                (None, Some(m)) => Modulus::new(parse_modulus(&m).map_err(Failure::Input)?)?,
                (None, None) => return Err(Failure::Input("give --lipschitz or --modulus".into())),
            };
            let mut subset = Vec::new();
            let mut rows = Vec::new();
            for (label, row) in table {
                subset.push(label_index(&space, &label)?);
                rows.push(row);
            }
            let map = PartialMap::sup_norm(space.clone(), subset, rows)?;
            let full = extend_with_modulus(&map, &modulus)?;
            Ok(json_line(&ExtendDoc {
                v: SCHEMA_VERSION,
                labels: space.labels().to_vec(),
                values: full.iter().map(|r| rational_strings(r)).collect(),
            }))
        }
    }
}

fn parse_modulus(text: &str) -> Result<Vec<(crate::rational::Rational, crate::rational::Rational)>, String> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|piece| {
            let (a, b) = piece
                .split_once(':')
                .ok_or_else(|| format!("modulus piece {piece:?} is not SLOPE:INTERCEPT"))?;
            Ok((parse_rational(a)?, parse_rational(b)?))
        })
        .collect()
}
