//! Text formats: distance matrices (CSV and PHYLIP), planar point samples,
//! and the JSON / CSV / DOT emitters used by the command line.
//!
//! Numbers are read exactly (`"1.25"` is 5/4, `"2/3"` is 2/3) and rationals
//! are always written as text, never as JSON numbers.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::metric::{validate_metric, FiniteMetricSpace};
use crate::rational::{format_decimal, format_rational, parse_rational, Rational};
use crate::tightspan::TightSpanComplex;
use crate::tree::WeightedTree;

/// A sample point `(x, y)` in the plane.
pub type PlanePoint = (Rational, Rational);

/// Version tag carried by every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    MatrixCsv,
    MatrixPhylip,
    PointsCsv,
}

/// Guesses the matrix dialect: PHYLIP files open with a bare point count.
pub fn detect_matrix_kind(text: &str) -> InputKind {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(line) if line.parse::<usize>().is_ok() => InputKind::MatrixPhylip,
        _ => InputKind::MatrixCsv,
    }
}

/// Parses and validates a distance matrix.
pub fn parse_distance_input(text: &str, kind: InputKind) -> Result<FiniteMetricSpace> {
    parse_distance_input_with(text, kind, false)
}

/// As [`parse_distance_input`]; with `merge_duplicates`, points at distance
/// zero from an earlier point are dropped in favour of that point.
pub fn parse_distance_input_with(text: &str, kind: InputKind, merge_duplicates: bool) -> Result<FiniteMetricSpace> {
    let (labels, matrix) = match kind {
        InputKind::MatrixCsv => read_matrix_csv(text)?,
        InputKind::MatrixPhylip => read_phylip(text)?,
        InputKind::PointsCsv => {
            return Err(Error::parse(1, 1, "point samples are not a distance matrix"));
        }
    };
    let (labels, matrix) = if merge_duplicates {
        merge_zero_distance(labels, matrix)
    } else {
        (labels, matrix)
    };
    validate_metric(labels, matrix)
}

fn number(field: &str, line: usize, column: usize) -> Result<Rational> {
    parse_rational(field).map_err(|m| Error::parse(line, column, m))
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn csv_records(text: &str) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut out = Vec::new();
    for record in csv_reader(text).records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        out.push((line, record));
    }
    Ok(out)
}

/// Header `labels,a,b,...` then one row `a,d(a,a),d(a,b),...` per point.
pub fn read_matrix_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<Rational>>)> {
    let records = csv_records(text)?;
    let Some((header_line, header)) = records.first() else {
        return Err(Error::parse(1, 1, "empty input"));
    };
    let labels: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let n = labels.len();
    let rows = &records[1..];
    if rows.len() != n {
        return Err(Error::parse(
            *header_line,
            1,
            format!("header names {n} points but {} rows follow", rows.len()),
        ));
    }
    let mut matrix = Vec::with_capacity(n);
    for (i, (line, record)) in rows.iter().enumerate() {
        if record.len() != n + 1 {
            return Err(Error::parse(
                *line,
                record.len().min(n + 1),
                format!("expected {} fields, found {}", n + 1, record.len()),
            ));
        }
        if record[0] != labels[i] {
            return Err(Error::parse(
                *line,
                1,
                format!("row label {:?} does not match column {:?}", &record[0], labels[i]),
            ));
        }
        let row = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(j, field)| number(field, *line, j + 2))
            .collect::<Result<Vec<_>>>()?;
        matrix.push(row);
    }
    Ok((labels, matrix))
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..pos]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// PHYLIP distance matrix: a point count, then one row per point with the
/// label and its distances. Full square rows are expected; lower-triangle
/// rows (with or without the diagonal) are mirrored.
pub fn read_phylip(text: &str) -> Result<(Vec<String>, Vec<Vec<Rational>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((count_line, first)) = lines.next() else {
        return Err(Error::parse(1, 1, "empty input"));
    };
    let head = tokens(first);
    let n: usize = match head.as_slice() {
        [(_, count)] | [(_, count), _] => count
            .parse()
            .map_err(|_| Error::parse(count_line, head[0].0, "expected the point count"))?,
        _ => return Err(Error::parse(count_line, 1, "expected the point count")),
    };
    #[derive(PartialEq)]
    enum Shape {
        Square,
        Lower,
        StrictLower,
    }
    let mut shape = None;
    let mut labels = Vec::with_capacity(n);
    let mut matrix = vec![vec![Rational::from_integer(0.into()); n]; n];
    for i in 0..n {
        let Some((line_no, line)) = lines.next() else {
            return Err(Error::parse(count_line, 1, format!("expected {n} rows, found {i}")));
        };
        let toks = tokens(line);
        let (_, label) = toks[0];
        let values = &toks[1..];
        let shape = shape.get_or_insert(match values.len() {
            0 => Shape::StrictLower,
            1 if n > 1 => Shape::Lower,
            _ => Shape::Square,
        });
        let expected = match shape {
            Shape::Square => n,
            Shape::Lower => i + 1,
            Shape::StrictLower => i,
        };
        if values.len() != expected {
            let column = values.get(expected).map_or(line.len() + 1, |t| t.0);
            return Err(Error::parse(
                line_no,
                column,
                format!("expected {expected} distances, found {}", values.len()),
            ));
        }
        labels.push(label.to_string());
        for (j, (col, tok)) in values.iter().enumerate() {
            let v = number(tok, line_no, *col)?;
            if *shape == Shape::Square {
                matrix[i][j] = v;
            } else {
                matrix[i][j] = v.clone();
                matrix[j][i] = v;
            }
        }
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::parse(line_no, 1, "unexpected trailing row"));
    }
    Ok((labels, matrix))
}

/// Collapses points at distance zero from an earlier point onto it.
pub fn merge_zero_distance(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> (Vec<String>, Vec<Vec<Rational>>) {
    let n = labels.len();
    let mut keep: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        let duplicate = keep.iter().any(|&k| {
            matrix
                .get(k)
                .and_then(|r| r.get(i))
                .is_some_and(num_traits::Zero::is_zero)
        });
        if !duplicate {
            keep.push(i);
        }
    }
    let labels = keep.iter().map(|&i| labels[i].clone()).collect();
    let matrix = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| matrix[i][j].clone()).collect())
        .collect();
    (labels, matrix)
}

/// `label,x,y` rows; a leading header row is skipped.
pub fn parse_points_csv(text: &str) -> Result<(Vec<String>, Vec<PlanePoint>)> {
    let records = csv_records(text)?;
    let mut labels = Vec::new();
    let mut points = Vec::new();
    for (k, (line, record)) in records.iter().enumerate() {
        if record.len() != 3 {
            return Err(Error::parse(
                *line,
                1,
                format!("expected label,x,y but found {} fields", record.len()),
            ));
        }
        let is_header = k == 0 && parse_rational(&record[1]).is_err() && parse_rational(&record[2]).is_err();
        if is_header {
            continue;
        }
        labels.push(record[0].to_string());
        points.push((number(&record[1], *line, 2)?, number(&record[2], *line, 3)?));
    }
    Ok((labels, points))
}

/// `label,v1,...,vk` rows keyed by label; a leading header row is skipped.
pub fn parse_value_table(text: &str) -> Result<Vec<(String, Vec<Rational>)>> {
    let records = csv_records(text)?;
    let mut out = Vec::new();
    for (k, (line, record)) in records.iter().enumerate() {
        if k == 0 && record.iter().skip(1).any(|f| parse_rational(f).is_err()) {
            continue;
        }
        let values = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(j, f)| number(f, *line, j + 2))
            .collect::<Result<Vec<_>>>()?;
        out.push((record[0].to_string(), values));
    }
    Ok(out)
}

/// Matrix CSV in the layout [`read_matrix_csv`] accepts.
pub fn write_matrix_csv(space: &FiniteMetricSpace) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let header = std::iter::once("labels".to_string()).chain(space.labels().iter().cloned());
    w.write_record(header).expect("in-memory write");
    for (i, row) in space.matrix().iter().enumerate() {
        let rec = std::iter::once(space.label(i).to_string()).chain(row.iter().map(format_rational));
        w.write_record(rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn serialize_rational<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

pub(crate) fn rational_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

#[derive(Serialize)]
struct SpaceDoc {
    labels: Vec<String>,
    matrix: Vec<Vec<String>>,
}

impl SpaceDoc {
    fn new(space: &FiniteMetricSpace) -> Self {
        Self {
            labels: space.labels().to_vec(),
            matrix: space.matrix().iter().map(|r| rational_strings(r)).collect(),
        }
    }
}

#[derive(Serialize)]
struct VertexDoc {
    label: String,
    values: Vec<String>,
}

#[derive(Serialize)]
struct TightSpanDoc {
    v: u32,
    space: SpaceDoc,
    vertices: Vec<VertexDoc>,
    dimension: usize,
    edges: Vec<[usize; 2]>,
}

/// `{"v":1,"space":{labels,matrix},"vertices":[{label,values}],"dimension",
/// "edges":[[i,j]]}` on one line.
pub fn tight_span_json(complex: &TightSpanComplex) -> String {
    let doc = TightSpanDoc {
        v: SCHEMA_VERSION,
        space: SpaceDoc::new(complex.space()),
        vertices: complex
            .vertex_labels()
            .into_iter()
            .zip(complex.vertices())
            .map(|(label, f)| VertexDoc {
                label,
                values: rational_strings(f.values()),
            })
            .collect(),
        dimension: complex.dimension(),
        edges: complex.edges().iter().map(|&(i, j)| [i, j]).collect(),
    };
    serde_json::to_string(&doc).expect("serializable")
}

/// Undirected DOT graph with weights as edge labels.
pub fn tree_to_dot(tree: &WeightedTree) -> String {
    let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let mut out = String::from("graph tree {\n");
    for (i, name) in tree.nodes().iter().enumerate() {
        let shape = if tree.leaf_map().iter().any(|(_, n)| *n == i) {
            "ellipse"
        } else {
            "point"
        };
        out.push_str(&format!("  {} [shape={shape}];\n", quote(name)));
    }
    for e in tree.edges() {
        out.push_str(&format!(
            "  {} -- {} [label={}];\n",
            quote(&tree.nodes()[e.a]),
            quote(&tree.nodes()[e.b]),
            quote(&format_decimal(&e.weight))
        ));
    }
    out.push_str("}\n");
    out
}
