// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

//! Python bindings for the graph archive toolkit.

use std::collections::BTreeMap;
use std::path::PathBuf;

use gar_core::bench::{self, BenchConfig, BenchReport};
use gar_core::colstore::{encode_column, write_column};
use gar_core::schema::load_schema;
use gar_core::{
    Codec, ColumnFile, ColumnValues, DataType, EdgeTopology, GarError as CoreError, IntervalLabelColumn, Orientation,
    Pac, Value,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyFloat, PyInt, PyString};
use pyo3::IntoPyObjectExt;

create_exception!(
    gar,
    GarError,
    PyException,
    "Raised for invalid or corrupt archive data."
);

fn err(e: CoreError) -> PyErr {
    GarError::new_err(e.to_string())
}

fn value_to_py(py: Python<'_>, v: Value) -> PyResult<Py<PyAny>> {
    match v {
        Value::Int64(x) => x.into_py_any(py),
        Value::Float64(x) => x.into_py_any(py),
        Value::String(x) => x.into_py_any(py),
        Value::Bool(x) => x.into_py_any(py),
    }
}

fn values_to_py(py: Python<'_>, values: ColumnValues) -> PyResult<Py<PyAny>> {
    match values {
        ColumnValues::Int64(v) => v.into_py_any(py),
        ColumnValues::Float64(v) => v.into_py_any(py),
        ColumnValues::String(v) => v.into_py_any(py),
        ColumnValues::Bool(v) => v.into_py_any(py),
    }
}

/// Converts a Python sequence into column values. Without `dtype` the type
/// is inferred from the elements; empty sequences need an explicit `dtype`.
fn values_from_py(values: &Bound<'_, PyAny>, dtype: Option<&str>) -> PyResult<ColumnValues> {
    let items: Vec<Bound<'_, PyAny>> = values.try_iter()?.collect::<PyResult<_>>()?;
    let dtype = match dtype {
        Some(name) => DataType::parse(name).ok_or_else(|| PyValueError::new_err(format!("unknown dtype `{name}`")))?,
        None if items.is_empty() => return Err(PyValueError::new_err("cannot infer the type of an empty sequence")),
        None if items.iter().all(|x| x.is_instance_of::<PyBool>()) => DataType::Bool,
        None if items
            .iter()
            .all(|x| x.is_instance_of::<PyInt>() && !x.is_instance_of::<PyBool>()) =>
        {
            DataType::Int64
        }
        None if items
            .iter()
            .all(|x| x.is_instance_of::<PyFloat>() || x.is_instance_of::<PyInt>()) =>
        {
            DataType::Float64
        }
        None if items.iter().all(|x| x.is_instance_of::<PyString>()) => DataType::String,
        None => return Err(PyTypeError::new_err("values must all be bool, int, float or str")),
    };
    Ok(match dtype {
        DataType::Bool => ColumnValues::Bool(items.iter().map(|x| x.extract()).collect::<PyResult<_>>()?),
        DataType::Int64 => ColumnValues::Int64(items.iter().map(|x| x.extract()).collect::<PyResult<_>>()?),
        DataType::Float64 => ColumnValues::Float64(items.iter().map(|x| x.extract()).collect::<PyResult<_>>()?),
        DataType::String => ColumnValues::String(items.iter().map(|x| x.extract()).collect::<PyResult<_>>()?),
    })
}

fn parse_codec(name: &str) -> PyResult<Codec> {
    match name.to_ascii_lowercase().as_str() {
        "plain" => Ok(Codec::Plain),
        "delta" => Ok(Codec::Delta),
        "rle_bool" | "rle" => Ok(Codec::RleBool),
        _ => Err(PyValueError::new_err(format!("unknown codec `{name}`"))),
    }
}

fn parse_direction(direction: &str) -> PyResult<Orientation> {
    match direction {
        "out" => Ok(Orientation::Csr),
        "in" => Ok(Orientation::Csc),
        _ => Err(PyValueError::new_err("direction must be `out` or `in`")),
    }
}

/// A single column file held in memory.
#[pyclass(name = "ColumnFile", module = "gar", frozen)]
struct PyColumnFile(ColumnFile);

#[pymethods]
impl PyColumnFile {
    #[new]
    fn open(path: PathBuf) -> PyResult<Self> {
        ColumnFile::open(path).map(Self).map_err(err)
    }

    /// Encodes `values` without touching the filesystem.
    #[staticmethod]
    #[pyo3(signature = (values, codec = "plain", page_rows = 1024, dtype = None))]
    fn encode(values: &Bound<'_, PyAny>, codec: &str, page_rows: usize, dtype: Option<&str>) -> PyResult<Self> {
        let values = values_from_py(values, dtype)?;
        let bytes = encode_column(&values, parse_codec(codec)?, page_rows).map_err(err)?;
        ColumnFile::from_bytes(bytes).map(Self).map_err(err)
    }

    #[getter]
    fn rows(&self) -> u64 {
        self.0.total_rows()
    }

    #[getter]
    fn page_count(&self) -> usize {
        self.0.page_count()
    }

    #[getter]
    fn codec(&self) -> String {
        format!("{:?}", self.0.codec())
    }

    #[getter]
    fn physical_type(&self) -> String {
        format!("{:?}", self.0.physical_type())
    }

    #[getter]
    fn pages_read(&self) -> u64 {
        self.0.pages_read()
    }

    fn reset_pages_read(&self) {
        self.0.reset_pages_read()
    }

    fn stats(&self) -> BTreeMap<&'static str, u64> {
        let s = self.0.stats();
        BTreeMap::from([
            ("payload_bytes", s.payload_bytes),
            ("file_bytes", s.file_bytes),
            ("rows", s.rows),
            ("pages", s.pages),
        ])
    }

    fn read_all(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        values_to_py(py, self.0.read_all().map_err(err)?)
    }

    fn read_rows(&self, py: Python<'_>, start: u64, end: u64) -> PyResult<Py<PyAny>> {
        values_to_py(py, self.0.read_rows(start, end).map_err(err)?)
    }

    /// `(id, value)` pairs for every PAC member, reading only named pages.
    fn fetch(&self, py: Python<'_>, pac: &PyPac) -> PyResult<Vec<(u64, Py<PyAny>)>> {
        let rows = gar_core::fetch_by_pac(&self.0, &pac.0).map_err(err)?;
        rows.into_iter().map(|(id, v)| Ok((id, value_to_py(py, v)?))).collect()
    }

    fn __len__(&self) -> usize {
        self.0.total_rows() as usize
    }

    fn __repr__(&self) -> String {
        format!(
            "ColumnFile(codec={:?}, type={:?}, rows={}, pages={})",
            self.0.codec(),
            self.0.physical_type(),
            self.0.total_rows(),
            self.0.page_count()
        )
    }
}

/// Page-aligned compressed id set.
#[pyclass(name = "Pac", module = "gar", frozen)]
struct PyPac(Pac);

#[pymethods]
impl PyPac {
    #[new]
    #[pyo3(signature = (ids, page_rows = 1024))]
    fn new(ids: Vec<u64>, page_rows: usize) -> Self {
        Self(Pac::from_ids(ids, page_rows))
    }

    fn ids(&self) -> Vec<u64> {
        self.0.ids().collect()
    }

    /// Indices of the pages holding at least one member.
    fn pages(&self) -> Vec<u64> {
        self.0.pages().map(|(p, _)| p).collect()
    }

    #[getter]
    fn page_count(&self) -> usize {
        self.0.page_count()
    }

    #[getter]
    fn page_rows(&self) -> usize {
        self.0.page_rows()
    }

    fn __contains__(&self, id: u64) -> bool {
        self.0.contains(id)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Pac(len={}, pages={})", self.0.len(), self.0.page_count())
    }
}

/// One orientation of an edge type.
#[pyclass(name = "EdgeTopology", module = "gar", frozen)]
struct PyEdgeTopology(EdgeTopology);

#[pymethods]
impl PyEdgeTopology {
    #[getter]
    fn orientation(&self) -> &'static str {
        self.0.orientation().as_str()
    }

    #[getter]
    fn key_count(&self) -> u64 {
        self.0.key_count()
    }

    #[getter]
    fn value_count(&self) -> u64 {
        self.0.value_count()
    }

    #[getter]
    fn edge_count(&self) -> u64 {
        self.0.edge_count()
    }

    fn neighbor_ids(&self, vertex: u64) -> PyResult<Vec<u64>> {
        self.0.neighbor_ids(vertex).map_err(err)
    }

    #[pyo3(signature = (vertex, page_rows = 1024))]
    fn neighbor_pac(&self, vertex: u64, page_rows: usize) -> PyResult<PyPac> {
        self.0.neighbor_pac(vertex, page_rows).map(PyPac).map_err(err)
    }

    /// Pages of the adjacency columns touched by the last retrieval.
    #[getter]
    fn retrieval_page_cost(&self) -> u64 {
        self.0.retrieval_page_cost()
    }

    fn offsets(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        values_to_py(py, self.0.offset_column().read_all().map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "EdgeTopology({}, keys={}, edges={})",
            self.0.orientation().as_str(),
            self.0.key_count(),
            self.0.edge_count()
        )
    }
}

/// A boolean label stored as run boundaries.
#[pyclass(name = "LabelColumn", module = "gar", frozen)]
struct PyLabelColumn(IntervalLabelColumn);

#[pymethods]
impl PyLabelColumn {
    #[new]
    fn new(label: String, values: Vec<bool>) -> Self {
        Self(IntervalLabelColumn::from_bools(label, &values))
    }

    #[getter]
    fn label(&self) -> &str {
        self.0.label()
    }

    #[getter]
    fn first_value(&self) -> bool {
        self.0.first_value()
    }

    #[getter]
    fn boundaries(&self) -> Vec<u64> {
        self.0.boundaries().to_vec()
    }

    fn to_list(&self) -> Vec<bool> {
        self.0.to_bools()
    }

    fn __getitem__(&self, row: u64) -> PyResult<bool> {
        self.0
            .value_at(row)
            .ok_or_else(|| pyo3::exceptions::PyIndexError::new_err(row))
    }

    fn __len__(&self) -> usize {
        self.0.vertex_count() as usize
    }
}

/// An archive directory opened read-only.
#[pyclass(name = "Archive", module = "gar", frozen)]
struct PyArchive(gar_core::Archive);

#[pymethods]
impl PyArchive {
    #[new]
    fn open(path: PathBuf) -> PyResult<Self> {
        gar_core::Archive::open(path).map(Self).map_err(err)
    }

    #[getter]
    fn page_rows(&self) -> usize {
        self.0.page_rows()
    }

    fn schema_yaml(&self) -> String {
        self.0.schema().to_yaml()
    }

    fn vertex_types(&self) -> Vec<String> {
        self.0
            .schema()
            .vertex_types
            .iter()
            .map(|v| v.type_name.clone())
            .collect()
    }

    fn edge_types(&self) -> Vec<String> {
        self.0.schema().edge_types.iter().map(|e| e.name()).collect()
    }

    fn vertex_count(&self, vertex_type: &str) -> PyResult<u64> {
        self.0.vertex_count(vertex_type).map_err(err)
    }

    fn external_keys(&self, vertex_type: &str) -> PyResult<Vec<String>> {
        self.0.external_keys(vertex_type).map_err(err)
    }

    fn property(&self, vertex_type: &str, name: &str) -> PyResult<PyColumnFile> {
        self.0.property_column(vertex_type, name).map(PyColumnFile).map_err(err)
    }

    fn label(&self, vertex_type: &str, name: &str) -> PyResult<PyLabelColumn> {
        self.0
            .label_intervals(vertex_type, name)
            .map(PyLabelColumn)
            .map_err(err)
    }

    #[pyo3(signature = (edge_type, direction = "out"))]
    fn topology(&self, edge_type: &str, direction: &str) -> PyResult<PyEdgeTopology> {
        self.0
            .topology(edge_type, parse_direction(direction)?)
            .map(PyEdgeTopology)
            .map_err(err)
    }

    #[pyo3(signature = (edge_type, vertex, direction = "out"))]
    fn neighbors(&self, edge_type: &str, vertex: u64, direction: &str) -> PyResult<Vec<u64>> {
        let topo = self.0.topology(edge_type, parse_direction(direction)?).map_err(err)?;
        topo.neighbor_ids(vertex).map_err(err)
    }

    /// Neighbor ids of `vertex` with the named properties of each neighbor.
    #[pyo3(signature = (edge_type, vertex, properties, direction = "out"))]
    fn neighbor_properties(
        &self,
        py: Python<'_>,
        edge_type: &str,
        vertex: u64,
        properties: Vec<String>,
        direction: &str,
    ) -> PyResult<Vec<(u64, Vec<Py<PyAny>>)>> {
        let o = parse_direction(direction)?;
        let neighbor_type = self.0.edge_schema(edge_type).map_err(err)?.value_type(o).to_string();
        let topo = self.0.topology(edge_type, o).map_err(err)?;
        let pac = topo.neighbor_pac(vertex, self.0.page_rows()).map_err(err)?;
        let mut rows: Vec<(u64, Vec<Py<PyAny>>)> = pac.ids().map(|id| (id, Vec::new())).collect();
        for p in &properties {
            let col = self.0.property_column(&neighbor_type, p).map_err(err)?;
            for (row, (_, v)) in rows.iter_mut().zip(gar_core::fetch_by_pac(&col, &pac).map_err(err)?) {
                row.1.push(value_to_py(py, v)?);
            }
        }
        Ok(rows)
    }

    /// Ids of vertices satisfying a label expression, and the number of
    /// interval evaluations spent.
    fn filter(&self, vertex_type: &str, expr: &str) -> PyResult<(Vec<u64>, u64)> {
        let expr = gar_core::parse_label_expr(expr).map_err(err)?;
        let out = self.0.filter(vertex_type, &expr).map_err(err)?;
        Ok((out.set.ids().collect(), out.evaluations))
    }

    /// `(ok, report)` from checking every file the schema implies.
    fn validate(&self) -> (bool, String) {
        let report = gar_core::validate_layout(self.0.schema(), self.0.dir());
        (report.is_ok(), report.to_string())
    }
}

/// Writes one column file to `path`.
#[pyfunction]
#[pyo3(signature = (path, values, codec = "plain", page_rows = 1024, dtype = None))]
fn write_column_file(
    path: PathBuf,
    values: &Bound<'_, PyAny>,
    codec: &str,
    page_rows: usize,
    dtype: Option<&str>,
) -> PyResult<()> {
    let values = values_from_py(values, dtype)?;
    write_column(path, &values, parse_codec(codec)?, page_rows)
        .map(drop)
        .map_err(err)
}

/// Builds an archive from CSV inputs keyed by vertex or edge type name and
/// returns per-stage timings in milliseconds plus row counts.
#[pyfunction]
#[pyo3(signature = (schema, vertices, out, edges = None, page_rows = None))]
fn build_archive(
    py: Python<'_>,
    schema: PathBuf,
    vertices: BTreeMap<String, PathBuf>,
    out: PathBuf,
    edges: Option<BTreeMap<String, PathBuf>>,
    page_rows: Option<usize>,
) -> PyResult<BTreeMap<String, f64>> {
    let mut schema = load_schema(schema).map_err(err)?;
    if let Some(pr) = page_rows {
        schema.page_rows = pr;
        schema.validate().map_err(err)?;
    }
    let vertices: Vec<(String, PathBuf)> = vertices.into_iter().collect();
    let edges: Vec<(String, PathBuf)> = edges.unwrap_or_default().into_iter().collect();
    let report = py
        .detach(|| gar_core::build_archive(&schema, &vertices, &edges, &out))
        .map_err(err)?;
    let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
    let mut out = BTreeMap::from([
        ("vertex_write_ms".to_string(), ms(report.vertex_write)),
        ("sort_ms".to_string(), ms(report.edges.sort)),
        ("offset_ms".to_string(), ms(report.edges.offset)),
        ("write_ms".to_string(), ms(report.edges.write)),
    ]);
    for (name, n) in report.vertex_counts.iter().chain(&report.edge_counts) {
        out.insert(format!("rows:{name}"), *n as f64);
    }
    Ok(out)
}

/// Normalized text of a label expression.
#[pyfunction]
fn parse_label_expr(expr: &str) -> PyResult<String> {
    gar_core::parse_label_expr(expr).map(|e| e.to_string()).map_err(err)
}

/// Evaluates `expr` over in-memory label columns.
#[pyfunction]
fn filter_labels(columns: Vec<Bound<'_, PyLabelColumn>>, expr: &str) -> PyResult<(Vec<u64>, u64)> {
    let cols: Vec<IntervalLabelColumn> = columns.iter().map(|c| c.get().0.clone()).collect();
    let expr = gar_core::parse_label_expr(expr).map_err(err)?;
    let out = gar_core::filter_complex(&cols, &expr).map_err(err)?;
    Ok((out.set.ids().collect(), out.evaluations))
}

/// Runs a benchmark suite and returns its fields as strings.
#[pyfunction]
#[pyo3(signature = (suite, scale = 100_000, seed = 42))]
fn run_bench(py: Python<'_>, suite: &str, scale: u64, seed: u64) -> PyResult<BTreeMap<String, String>> {
    let cfg = BenchConfig {
        vertices: scale,
        seed,
        ..BenchConfig::default()
    };
    let report = py
        .detach(|| match suite {
            "topology" => bench::run_topology(&cfg).map(BenchReport::Topology).map(Some),
            "labels" => bench::run_labels(&cfg).map(BenchReport::Labels).map(Some),
            "e2e" => bench::run_e2e(&cfg).map(BenchReport::E2e).map(Some),
            _ => Ok(None),
        })
        .map_err(err)?
        .ok_or_else(|| PyValueError::new_err(format!("unknown suite `{suite}`")))?;
    Ok(bench::report_rows(&report).into_iter().collect())
}

#[pymodule]
fn gar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GarError", m.py().get_type::<GarError>())?;
    m.add_class::<PyArchive>()?;
    m.add_class::<PyColumnFile>()?;
    m.add_class::<PyEdgeTopology>()?;
    m.add_class::<PyLabelColumn>()?;
    m.add_class::<PyPac>()?;
    m.add_function(wrap_pyfunction!(write_column_file, m)?)?;
    m.add_function(wrap_pyfunction!(build_archive, m)?)?;
    m.add_function(wrap_pyfunction!(parse_label_expr, m)?)?;
    m.add_function(wrap_pyfunction!(filter_labels, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    Ok(())
}
