//! Python bindings. Exact numbers cross the boundary as text on the way in
//! (`"5/4"`, `"1.25"`, `3`, or a `fractions.Fraction`) and as
//! `fractions.Fraction` on the way out.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use mtk::io;
use mtk::rational::{format_rational, parse_rational};
use mtk::tightspan::enumerate_tight_span_bounded;
use mtk::tree::realize_tree_bounded;
use mtk::{FiniteMetricSpace, Rational, TreePoint};

create_exception!(pymtk, MetricError, PyValueError);

type FractionPair<'py> = (Bound<'py, PyAny>, Bound<'py, PyAny>);

fn err(e: mtk::Error) -> PyErr {
    MetricError::new_err(e.to_string())
}

fn exact(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = value.str()?.to_string();
    parse_rational(&text).map_err(PyValueError::new_err)
}

fn fraction<'py>(py: Python<'py>, v: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((format_rational(v),))
}

fn fractions<'py>(py: Python<'py>, vs: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = vs.iter().map(|v| fraction(py, v)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn exact_points(points: &Bound<'_, PyAny>) -> PyResult<Vec<(Rational, Rational)>> {
    points
        .try_iter()?
        .map(|p| {
            let p = p?;
            Ok((exact(&p.get_item(0)?)?, exact(&p.get_item(1)?)?))
        })
        .collect()
}

/// A finite metric space with exact distances.
#[pyclass(name = "MetricSpace", module = "pymtk", frozen, from_py_object)]
#[derive(Clone)]
struct PyMetricSpace {
    inner: FiniteMetricSpace,
}

impl PyMetricSpace {
    fn index(&self, label: &str) -> PyResult<usize> {
        self.inner
            .index_of(label)
            .ok_or_else(|| PyValueError::new_err(format!("unknown label {label:?}")))
    }
}

#[pymethods]
impl PyMetricSpace {
    #[new]
    fn new(labels: Vec<String>, matrix: &Bound<'_, PyAny>) -> PyResult<Self> {
        let rows = matrix
            .try_iter()?
            .map(|row| row?.try_iter()?.map(|v| exact(&v?)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        let inner = mtk::validate_metric(labels, rows).map_err(err)?;
        Ok(Self { inner })
    }

    /// Parses matrix CSV or PHYLIP text, guessing the dialect.
    #[staticmethod]
    #[pyo3(signature = (text, merge_duplicates = false))]
    fn parse(text: &str, merge_duplicates: bool) -> PyResult<Self> {
        let kind = io::detect_matrix_kind(text);
        let inner = io::parse_distance_input_with(text, kind, merge_duplicates).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("MetricSpace({:?})", self.inner.labels())
    }

    fn distance<'py>(&self, py: Python<'py>, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.dist(self.index(a)?, self.index(b)?))
    }

    fn matrix<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyList>>> {
        self.inner.matrix().iter().map(|row| fractions(py, row)).collect()
    }

    fn to_csv(&self) -> String {
        io::write_matrix_csv(&self.inner)
    }

    /// `{"holds", "excess", "worst_quadruple"}` for the four-point condition.
    fn four_point<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = mtk::four_point_report(&self.inner);
        let d = PyDict::new(py);
        d.set_item("holds", r.holds)?;
        d.set_item("excess", fraction(py, &r.excess)?)?;
        let quad: Vec<&str> = r.worst_quadruple.iter().map(|&i| self.inner.label(i)).collect();
        d.set_item("worst_quadruple", quad)?;
        Ok(d)
    }

    fn interval(&self, x: &str, y: &str) -> PyResult<Vec<String>> {
        let pts = mtk::metric_interval(&self.inner, self.index(x)?, self.index(y)?).map_err(err)?;
        Ok(pts.into_iter().map(|i| self.inner.label(i).to_string()).collect())
    }

    fn medians(&self, x: &str, y: &str, z: &str) -> PyResult<Vec<String>> {
        let pts = mtk::median_points(&self.inner, self.index(x)?, self.index(y)?, self.index(z)?).map_err(err)?;
        Ok(pts.into_iter().map(|i| self.inner.label(i).to_string()).collect())
    }

    #[pyo3(signature = (max_points = mtk::tightspan::DEFAULT_MAX_POINTS))]
    fn tight_span(&self, max_points: usize) -> PyResult<PyTightSpan> {
        let inner = enumerate_tight_span_bounded(&self.inner, max_points).map_err(err)?;
        Ok(PyTightSpan { inner })
    }

    #[pyo3(signature = (max_points = mtk::tightspan::DEFAULT_MAX_POINTS))]
    fn realize_tree(&self, max_points: usize) -> PyResult<PyTree> {
        let inner = realize_tree_bounded(&self.inner, max_points).map_err(err)?;
        Ok(PyTree { inner })
    }

    /// Hull point inside every ball of `{label: radius}`, plus the check on
    /// the space's own points.
    fn witness<'py>(&self, py: Python<'py>, balls: &Bound<'py, PyDict>) -> PyResult<Bound<'py, PyDict>> {
        let mut pairs = Vec::new();
        for (k, v) in balls.iter() {
            pairs.push((self.index(&k.extract::<String>()?)?, exact(&v)?));
        }
        let family = mtk::BallFamily::from_pairs(&self.inner, pairs).map_err(err)?;
        let f = mtk::ball_intersection_witness(&self.inner, &family).map_err(err)?;
        let check = mtk::binary_ball_intersection_check(&self.inner, &family);
        let d = PyDict::new(py);
        d.set_item("values", fractions(py, f.values())?)?;
        d.set_item("pairwise_ok", check.pairwise_ok)?;
        d.set_item("node_witness", check.witness.map(|i| self.inner.label(i).to_string()))?;
        Ok(d)
    }

    /// Extends `{label: [v1, ..., vk]}` to every point into `(Q^k, sup)`.
    #[pyo3(signature = (values, lipschitz = None, modulus = None))]
    fn extend<'py>(
        &self,
        py: Python<'py>,
        values: &Bound<'py, PyDict>,
        lipschitz: Option<&Bound<'py, PyAny>>,
        modulus: Option<Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let modulus = match (lipschitz, modulus) {
            (Some(l), None) => mtk::Modulus::lipschitz(exact(l)?),
            (None, Some(pieces)) => mtk::Modulus::new(
                pieces
                    .iter()
                    .map(|(a, b)| Ok((exact(a)?, exact(b)?)))
                    .collect::<PyResult<Vec<_>>>()?,
            ),
            _ => return Err(PyValueError::new_err("give exactly one of lipschitz= or modulus=")),
        }
        .map_err(err)?;
        let mut subset = Vec::new();
        let mut rows = Vec::new();
        for (k, v) in values.iter() {
            subset.push(self.index(&k.extract::<String>()?)?);
            rows.push(v.try_iter()?.map(|x| exact(&x?)).collect::<PyResult<Vec<_>>>()?);
        }
        let map = mtk::PartialMap::sup_norm(self.inner.clone(), subset, rows).map_err(err)?;
        let full = mtk::extend_with_modulus(&map, &modulus).map_err(err)?;
        let d = PyDict::new(py);
        for (i, row) in full.iter().enumerate() {
            d.set_item(self.inner.label(i), fractions(py, row)?)?;
        }
        Ok(d)
    }
}

/// Vertices, dimension and 1-skeleton of a tight span.
#[pyclass(name = "TightSpan", module = "pymtk", frozen)]
struct PyTightSpan {
    inner: mtk::TightSpanComplex,
}

#[pymethods]
impl PyTightSpan {
    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn vertex_labels(&self) -> Vec<String> {
        self.inner.vertex_labels()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyList>>> {
        self.inner
            .vertices()
            .iter()
            .map(|f| fractions(py, f.values()))
            .collect()
    }

    fn vertex_space(&self) -> PyResult<PyMetricSpace> {
        let inner = mtk::vertex_metric_space(&self.inner).map_err(err)?;
        Ok(PyMetricSpace { inner })
    }

    fn to_json(&self) -> String {
        io::tight_span_json(&self.inner)
    }
}

/// A weighted tree realizing a tree metric.
#[pyclass(name = "Tree", module = "pymtk", frozen)]
struct PyTree {
    inner: mtk::WeightedTree,
}

#[pymethods]
impl PyTree {
    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.inner.nodes().to_vec()
    }

    /// `(a, b, weight)` by node name.
    fn edges<'py>(&self, py: Python<'py>) -> PyResult<Vec<(String, String, Bound<'py, PyAny>)>> {
        let names = self.inner.nodes();
        self.inner
            .edges()
            .iter()
            .map(|e| Ok((names[e.a].clone(), names[e.b].clone(), fraction(py, &e.weight)?)))
            .collect()
    }

    fn distance<'py>(&self, py: Python<'py>, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
        let node = |name: &str| {
            self.inner
                .node_by_name(name)
                .map(TreePoint::Node)
                .ok_or_else(|| PyValueError::new_err(format!("unknown node {name:?}")))
        };
        let d = mtk::tree_distance(&self.inner, &node(a)?, &node(b)?).map_err(err)?;
        fraction(py, &d)
    }

    fn newick(&self) -> String {
        mtk::to_newick(&self.inner)
    }

    fn dot(&self) -> String {
        io::tree_to_dot(&self.inner)
    }
}

/// River metric on `[(x, y), ...]`.
#[pyfunction]
fn river(points: &Bound<'_, PyAny>, labels: Vec<String>) -> PyResult<PyMetricSpace> {
    let inner = mtk::river_metric(&exact_points(points)?, &labels).map_err(err)?;
    Ok(PyMetricSpace { inner })
}

/// Radial metric on `[(x, y), ...]`; Euclidean norms must be rational.
#[pyfunction]
#[pyo3(signature = (points, labels, taxicab = false))]
fn radial(points: &Bound<'_, PyAny>, labels: Vec<String>, taxicab: bool) -> PyResult<PyMetricSpace> {
    let norm = if taxicab {
        mtk::RadialNorm::Taxicab
    } else {
        mtk::RadialNorm::Euclidean
    };
    let inner = mtk::radial_metric(&exact_points(points)?, &labels, norm).map_err(err)?;
    Ok(PyMetricSpace { inner })
}

/// Links each `(space, link_label, anchor_label)` onto `base`.
#[pyfunction]
fn glue(base: &PyMetricSpace, components: Vec<(PyMetricSpace, String, String)>) -> PyResult<PyMetricSpace> {
    let components = components
        .into_iter()
        .map(|(space, link, anchor)| {
            Ok(mtk::Component {
                link: space.index(&link)?,
                anchor: base.index(&anchor)?,
                space: space.inner,
            })
        })
        .collect::<PyResult<Vec<_>>>()?;
    let inner = mtk::glue_spaces(&mtk::LinkSpec {
        base: base.inner.clone(),
        components,
    })
    .map_err(err)?;
    Ok(PyMetricSpace { inner })
}

/// Parses label,x,y rows.
#[pyfunction]
fn parse_points<'py>(py: Python<'py>, text: &str) -> PyResult<(Vec<String>, Vec<FractionPair<'py>>)> {
    let (labels, pts) = io::parse_points_csv(text).map_err(err)?;
    let pts = pts
        .iter()
        .map(|(x, y)| Ok((fraction(py, x)?, fraction(py, y)?)))
        .collect::<PyResult<Vec<_>>>()?;
    Ok((labels, pts))
}

#[pymodule]
fn pymtk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMetricSpace>()?;
    m.add_class::<PyTightSpan>()?;
    m.add_class::<PyTree>()?;
    m.add_function(wrap_pyfunction!(river, m)?)?;
    m.add_function(wrap_pyfunction!(radial, m)?)?;
    m.add_function(wrap_pyfunction!(glue, m)?)?;
    m.add_function(wrap_pyfunction!(parse_points, m)?)?;
    m.add("MetricError", m.py().get_type::<MetricError>())?;
    Ok(())
}
