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

//! Graph-level metadata: vertex and edge types, their properties and
//! candidate labels, partitioning, and the `_graph.yaml` document that binds
//! an archive's column files together.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::archive::layout;
use crate::colstore::{self, ColumnFile, PhysicalType, DEFAULT_PAGE_ROWS};
use crate::error::{GarError, Result};

pub const CURRENT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataType {
    Int64,
    Float64,
    String,
    Bool,
}

impl DataType {
    pub fn as_str(self) -> &'static str {
        match self {
            DataType::Int64 => "int64",
            DataType::Float64 => "float64",
            DataType::String => "string",
            DataType::Bool => "bool",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "int64" => Some(DataType::Int64),
            "float64" => Some(DataType::Float64),
            "string" => Some(DataType::String),
            "bool" => Some(DataType::Bool),
            _ => None,
        }
    }

    pub fn physical(self) -> PhysicalType {
        match self {
            DataType::Int64 => PhysicalType::Int64,
            DataType::Float64 => PhysicalType::Float64,
            DataType::String => PhysicalType::String,
            DataType::Bool => PhysicalType::Bool,
        }
    }
}

/// Sort order of a materialized edge table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// Sorted by source, offsets over source vertices.
    Csr,
    /// Sorted by destination, offsets over destination vertices.
    Csc,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Csr => "csr",
            Orientation::Csc => "csc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csr" => Some(Orientation::Csr),
            "csc" => Some(Orientation::Csc),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertySchema {
    pub name: String,
    pub datatype: DataType,
}

impl PropertySchema {
    pub fn new(name: impl Into<String>, datatype: DataType) -> Self {
        PropertySchema {
            name: name.into(),
            datatype,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexTypeSchema {
    pub type_name: String,
    /// Rows per partition; partition `i` owns internal IDs from `partition_size * i`.
    pub partition_size: u64,
    pub properties: Vec<PropertySchema>,
    pub candidate_labels: Vec<String>,
}

impl VertexTypeSchema {
    pub fn property(&self, name: &str) -> Option<&PropertySchema> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.candidate_labels.iter().any(|l| l == label)
    }

    pub fn partition_count(&self, vertex_count: u64) -> u64 {
        vertex_count.div_ceil(self.partition_size)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTypeSchema {
    pub src_type: String,
    pub relation: String,
    pub dst_type: String,
    pub properties: Vec<PropertySchema>,
    pub orientations: Vec<Orientation>,
}

impl EdgeTypeSchema {
    /// `<Src>_<Rel>_<Dst>`, the edge type's directory name.
    pub fn name(&self) -> String {
        format!("{}_{}_{}", self.src_type, self.relation, self.dst_type)
    }

    pub fn has_orientation(&self, o: Orientation) -> bool {
        self.orientations.contains(&o)
    }

    /// Vertex type whose IDs index the offset column of `o`.
    pub fn key_type(&self, o: Orientation) -> &str {
        match o {
            Orientation::Csr => &self.src_type,
            Orientation::Csc => &self.dst_type,
        }
    }

    pub fn value_type(&self, o: Orientation) -> &str {
        match o {
            Orientation::Csr => &self.dst_type,
            Orientation::Csc => &self.src_type,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSchema {
    pub name: String,
    pub path_prefix: String,
    pub format_version: u32,
    /// Rows per column page for every file in the archive.
    pub page_rows: usize,
    pub vertex_types: Vec<VertexTypeSchema>,
    pub edge_types: Vec<EdgeTypeSchema>,
}

impl GraphSchema {
    pub fn new(name: impl Into<String>) -> Self {
        GraphSchema {
            name: name.into(),
            path_prefix: "./".into(),
            format_version: CURRENT_FORMAT_VERSION,
            page_rows: DEFAULT_PAGE_ROWS,
            vertex_types: Vec::new(),
            edge_types: Vec::new(),
        }
    }

    pub fn vertex_type(&self, name: &str) -> Option<&VertexTypeSchema> {
        self.vertex_types.iter().find(|v| v.type_name == name)
    }

    /// Looks an edge type up by its `<Src>_<Rel>_<Dst>` name.
    pub fn edge_type(&self, name: &str) -> Option<&EdgeTypeSchema> {
        self.edge_types.iter().find(|e| e.name() == name)
    }

    /// Directory holding the column files of an archive rooted at `archive_dir`.
    pub fn data_root(&self, archive_dir: impl AsRef<Path>) -> PathBuf {
        let mut root = archive_dir.as_ref().to_path_buf();
        root.extend(
            Path::new(&self.path_prefix)
                .components()
                .filter(|c| !matches!(c, std::path::Component::CurDir)),
        );
        root
    }

    pub fn from_yaml(text: &str) -> Result<GraphSchema> {
        let de = serde_yaml::Deserializer::from_str(text);
        let raw: RawSchema = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "<document>".to_string() } else { path };
            GarError::schema(path, e.into_inner().to_string())
        })?;
        raw.into_schema()
    }

    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(&RawSchema::from_schema(self)).expect("schema serializes")
    }

    /// Checks every invariant, reporting the first violation with its key path.
    pub fn validate(&self) -> Result<()> {
        // Re-running the document conversion keeps one set of rules.
        RawSchema::from_schema(self).into_schema().map(|_| ())
    }
}

pub fn load_schema(path: impl AsRef<Path>) -> Result<GraphSchema> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| GarError::io(path, e))?;
    GraphSchema::from_yaml(&text)
}

pub fn save_schema(schema: &GraphSchema, path: impl AsRef<Path>) -> Result<()> {
    schema.validate()?;
    let path = path.as_ref();
    fs::write(path, schema.to_yaml()).map_err(|e| GarError::io(path, e))
}

// --- document representation -------------------------------------------

fn default_prefix() -> String {
    "./".into()
}

fn default_page_rows() -> usize {
    DEFAULT_PAGE_ROWS
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchema {
    name: String,
    format_version: u32,
    #[serde(default = "default_prefix")]
    prefix: String,
    #[serde(default = "default_page_rows")]
    page_rows: usize,
    #[serde(default)]
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<RawEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    #[serde(rename = "type")]
    type_name: String,
    partition_size: u64,
    #[serde(default)]
    properties: Vec<RawProperty>,
    #[serde(default)]
    labels: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProperty {
    name: String,
    #[serde(rename = "type")]
    datatype: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    src: String,
    relation: String,
    dst: String,
    #[serde(default)]
    properties: Vec<RawProperty>,
    orientations: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn check_identifier(path: &str, s: &str) -> Result<()> {
    if is_identifier(s) {
        Ok(())
    } else {
        Err(GarError::schema(path, format!("`{s}` is not a valid identifier")))
    }
}

fn convert_properties(path: &str, raw: Vec<RawProperty>) -> Result<Vec<PropertySchema>> {
    let mut seen = HashSet::new();
    raw.into_iter()
        .enumerate()
        .map(|(i, p)| {
            let at = format!("{path}[{i}]");
            check_identifier(&format!("{at}.name"), &p.name)?;
            if p.name == "labels" {
                return Err(GarError::schema(
                    format!("{at}.name"),
                    "`labels` is reserved for the label column",
                ));
            }
            if !seen.insert(p.name.clone()) {
                return Err(GarError::schema(
                    format!("{at}.name"),
                    format!("duplicate property `{}`", p.name),
                ));
            }
            let datatype = DataType::parse(&p.datatype)
                .ok_or_else(|| GarError::schema(format!("{at}.type"), format!("unknown datatype `{}`", p.datatype)))?;
            Ok(PropertySchema { name: p.name, datatype })
        })
        .collect()
}

fn raw_properties(props: &[PropertySchema]) -> Vec<RawProperty> {
    props
        .iter()
        .map(|p| RawProperty {
            name: p.name.clone(),
            datatype: p.datatype.as_str().into(),
        })
        .collect()
}

impl RawSchema {
    fn from_schema(s: &GraphSchema) -> RawSchema {
        RawSchema {
            name: s.name.clone(),
            format_version: s.format_version,
            prefix: s.path_prefix.clone(),
            page_rows: s.page_rows,
            vertices: s
                .vertex_types
                .iter()
                .map(|v| RawVertex {
                    type_name: v.type_name.clone(),
                    partition_size: v.partition_size,
                    properties: raw_properties(&v.properties),
                    labels: v.candidate_labels.clone(),
                })
                .collect(),
            edges: s
                .edge_types
                .iter()
                .map(|e| RawEdge {
                    src: e.src_type.clone(),
                    relation: e.relation.clone(),
                    dst: e.dst_type.clone(),
                    properties: raw_properties(&e.properties),
                    orientations: e.orientations.iter().map(|o| o.as_str().into()).collect(),
                })
                .collect(),
        }
    }

    fn into_schema(self) -> Result<GraphSchema> {
        if self.name.trim().is_empty() {
            return Err(GarError::schema("name", "graph name is empty"));
        }
        if self.format_version != CURRENT_FORMAT_VERSION {
            return Err(GarError::schema(
                "format_version",
                format!("unsupported format version {}", self.format_version),
            ));
        }
        let prefix = Path::new(&self.prefix);
        if prefix.is_absolute()
            || prefix
                .components()
                .any(|c| matches!(c, std::path::Component::ParentDir))
        {
            return Err(GarError::schema(
                "prefix",
                format!("prefix `{}` must be a relative path inside the archive", self.prefix),
            ));
        }
        let page_rows =
            colstore::validate_page_rows(self.page_rows).map_err(|e| GarError::schema("page_rows", e.to_string()))?;

        let mut type_names = HashSet::new();
        let mut vertex_types = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.into_iter().enumerate() {
            let at = format!("vertices[{i}]");
            check_identifier(&format!("{at}.type"), &v.type_name)?;
            if !type_names.insert(v.type_name.clone()) {
                return Err(GarError::schema(
                    format!("{at}.type"),
                    format!("duplicate vertex type `{}`", v.type_name),
                ));
            }
            if v.partition_size == 0 || v.partition_size % page_rows as u64 != 0 {
                return Err(GarError::schema(
                    format!("{at}.partition_size"),
                    format!(
                        "partition size {} must be a positive multiple of the page row capacity {page_rows}",
                        v.partition_size
                    ),
                ));
            }
            let properties = convert_properties(&format!("{at}.properties"), v.properties)?;
            let mut labels = HashSet::new();
            for (j, label) in v.labels.iter().enumerate() {
                let lat = format!("{at}.labels[{j}]");
                check_identifier(&lat, label)?;
                if !labels.insert(label.as_str()) {
                    return Err(GarError::schema(lat, format!("duplicate label `{label}`")));
                }
                if properties.iter().any(|p| &p.name == label) {
                    return Err(GarError::schema(
                        lat,
                        format!("label `{label}` collides with a property name"),
                    ));
                }
            }
            vertex_types.push(VertexTypeSchema {
                type_name: v.type_name,
                partition_size: v.partition_size,
                properties,
                candidate_labels: v.labels,
            });
        }

        let mut triples = HashSet::new();
        let mut dir_names = HashSet::new();
        let mut edge_types = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.into_iter().enumerate() {
            let at = format!("edges[{i}]");
            for (key, name) in [("src", &e.src), ("dst", &e.dst)] {
                if !type_names.contains(name) {
                    return Err(GarError::schema(
                        format!("{at}.{key}"),
                        format!("dangling vertex type `{name}`"),
                    ));
                }
            }
            check_identifier(&format!("{at}.relation"), &e.relation)?;
            if !triples.insert((e.src.clone(), e.relation.clone(), e.dst.clone())) {
                return Err(GarError::schema(
                    at,
                    format!("duplicate edge type ({}, {}, {})", e.src, e.relation, e.dst),
                ));
            }
            if !dir_names.insert(format!("{}_{}_{}", e.src, e.relation, e.dst)) {
                return Err(GarError::schema(
                    at,
                    "edge type name collides with another edge type's directory",
                ));
            }
            if e.orientations.is_empty() {
                return Err(GarError::schema(
                    format!("{at}.orientations"),
                    "at least one of csr, csc is required",
                ));
            }
            let mut orientations = Vec::with_capacity(e.orientations.len());
            for (j, o) in e.orientations.iter().enumerate() {
                let oat = format!("{at}.orientations[{j}]");
                let parsed = Orientation::parse(o)
                    .ok_or_else(|| GarError::schema(&oat, format!("unknown orientation `{o}`")))?;
                if orientations.contains(&parsed) {
                    return Err(GarError::schema(oat, format!("duplicate orientation `{o}`")));
                }
                orientations.push(parsed);
            }
            let properties = convert_properties(&format!("{at}.properties"), e.properties)?;
            edge_types.push(EdgeTypeSchema {
                src_type: e.src,
                relation: e.relation,
                dst_type: e.dst,
                properties,
                orientations,
            });
        }

        Ok(GraphSchema {
            name: self.name,
            path_prefix: self.prefix,
            format_version: self.format_version,
            page_rows,
            vertex_types,
            edge_types,
        })
    }
}

// --- layout validation ---------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileStatus {
    Present { rows: u64 },
    Missing,
    Unreadable(String),
    RowMismatch { rows: u64, expected: u64 },
}

impl FileStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, FileStatus::Present { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutEntry {
    /// Path relative to the archive root.
    pub path: PathBuf,
    pub status: FileStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSummary {
    pub vertex_type: String,
    pub vertex_count: Option<u64>,
    pub partition_size: u64,
    pub partitions: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LayoutReport {
    pub entries: Vec<LayoutEntry>,
    pub partitions: Vec<PartitionSummary>,
}

impl LayoutReport {
    pub fn is_ok(&self) -> bool {
        self.entries.iter().all(|e| e.status.is_ok())
    }

    pub fn problems(&self) -> impl Iterator<Item = &LayoutEntry> {
        self.entries.iter().filter(|e| !e.status.is_ok())
    }

    pub fn entry(&self, path: impl AsRef<Path>) -> Option<&LayoutEntry> {
        self.entries.iter().find(|e| e.path == path.as_ref())
    }
}

impl fmt::Display for LayoutReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.partitions {
            match (p.vertex_count, p.partitions) {
                (Some(n), Some(k)) => writeln!(
                    f,
                    "vertex {}: {n} vertices in {k} partition(s) of {}",
                    p.vertex_type, p.partition_size
                )?,
                _ => writeln!(f, "vertex {}: vertex count unknown", p.vertex_type)?,
            }
        }
        for e in &self.entries {
            let path = e.path.display();
            match &e.status {
                FileStatus::Present { rows } => writeln!(f, "ok       {path} ({rows} rows)")?,
                FileStatus::Missing => writeln!(f, "MISSING  {path}")?,
                FileStatus::Unreadable(msg) => writeln!(f, "CORRUPT  {path}: {msg}")?,
                FileStatus::RowMismatch { rows, expected } => {
                    writeln!(f, "MISMATCH {path}: {rows} rows, expected {expected}")?
                }
            }
        }
        write!(f, "{}", if self.is_ok() { "layout OK" } else { "layout INVALID" })
    }
}

fn probe(root: &Path, rel: PathBuf) -> (PathBuf, std::result::Result<u64, FileStatus>) {
    let full = root.join(&rel);
    let status = if !full.exists() {
        Err(FileStatus::Missing)
    } else {
        match ColumnFile::open(&full) {
            Ok(col) => Ok(col.total_rows()),
            Err(e) => Err(FileStatus::Unreadable(e.to_string())),
        }
    };
    (rel, status)
}

/// Compares probed files against an expected row count, taking the first
/// readable file's count when none is given.
fn settle(
    probed: Vec<(PathBuf, std::result::Result<u64, FileStatus>)>,
    expected: Option<u64>,
    out: &mut Vec<LayoutEntry>,
) -> Option<u64> {
    let reference = expected.or_else(|| probed.iter().find_map(|(_, r)| r.as_ref().ok().copied()));
    for (path, r) in probed {
        let status = match (r, reference) {
            (Ok(rows), Some(exp)) if rows != exp => FileStatus::RowMismatch { rows, expected: exp },
            (Ok(rows), _) => FileStatus::Present { rows },
            (Err(s), _) => s,
        };
        out.push(LayoutEntry { path, status });
    }
    reference
}

/// Lists every column file the schema implies under the archive at
/// `archive_dir` and checks that each exists, decodes, and agrees on row
/// counts. Reported paths are relative to the data root.
pub fn validate_layout(schema: &GraphSchema, archive_dir: impl AsRef<Path>) -> LayoutReport {
    let root = &schema.data_root(archive_dir);
    let mut report = LayoutReport::default();
    let mut counts = std::collections::HashMap::new();

    for vt in &schema.vertex_types {
        let name = &vt.type_name;
        let mut probed = vec![probe(root, layout::vertex_key(name))];
        probed.extend(
            vt.properties
                .iter()
                .map(|p| probe(root, layout::vertex_property(name, &p.name))),
        );
        probed.extend(
            vt.candidate_labels
                .iter()
                .map(|l| probe(root, layout::vertex_label(name, l))),
        );
        let key_rows = probed[0].1.as_ref().ok().copied();
        let n = settle(probed, key_rows, &mut report.entries);
        if let Some(n) = n {
            counts.insert(name.clone(), n);
        }
        report.partitions.push(PartitionSummary {
            vertex_type: name.clone(),
            vertex_count: n,
            partition_size: vt.partition_size,
            partitions: n.map(|n| vt.partition_count(n)),
        });
    }

    for et in &schema.edge_types {
        let edge = et.name();
        for &o in &et.orientations {
            let mut probed = vec![
                probe(root, layout::edge_file(&edge, o, "src")),
                probe(root, layout::edge_file(&edge, o, "dst")),
            ];
            probed.extend(
                et.properties
                    .iter()
                    .map(|p| probe(root, layout::edge_property(&edge, o, &p.name))),
            );
            settle(probed, None, &mut report.entries);
            let offset = probe(root, layout::edge_file(&edge, o, "offset"));
            let expected = counts.get(et.key_type(o)).map(|n| n + 1);
            settle(vec![offset], expected, &mut report.entries);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
name: people
format_version: 1
vertices:
  - type: Person
    partition_size: 1024
    labels: [Asian, Enrollee]
";

    pub(crate) const MEDICAL: &str = "
name: medical
format_version: 1
prefix: ./medical/
vertices:
  - type: Person
    partition_size: 1024
    properties:
      - { name: pid, type: int64 }
      - { name: age, type: int64 }
    labels: [Asian, Enrollee]
  - type: Disease
    partition_size: 1024
    properties:
      - { name: name, type: string }
edges:
  - src: Person
    relation: Diagnosed
    dst: Disease
    properties:
      - { name: date, type: string }
    orientations: [csr, csc]
";

    fn err_of(doc: &str) -> (String, String) {
        match GraphSchema::from_yaml(doc).unwrap_err() {
            GarError::Schema { path, message } => (path, message),
            other => panic!("expected schema error, got {other}"),
        }
    }

    #[test]
    fn minimal_document_loads() {
        let s = GraphSchema::from_yaml(MINIMAL).unwrap();
        assert_eq!(s.vertex_types.len(), 1);
        assert_eq!(s.edge_types.len(), 0);
        assert_eq!(s.vertex_types[0].candidate_labels, vec!["Asian", "Enrollee"]);
        assert_eq!(s.page_rows, 1024);
    }

    #[test]
    fn medical_example_loads() {
        let s = GraphSchema::from_yaml(MEDICAL).unwrap();
        assert_eq!(s.vertex_types.len(), 2);
        assert_eq!(s.edge_types.len(), 1);
        let e = s.edge_type("Person_Diagnosed_Disease").unwrap();
        assert_eq!(e.orientations, vec![Orientation::Csr, Orientation::Csc]);
        assert_eq!(e.key_type(Orientation::Csc), "Disease");
    }

    #[test]
    fn yaml_roundtrip_is_identity() {
        for doc in [MINIMAL, MEDICAL] {
            let s = GraphSchema::from_yaml(doc).unwrap();
            assert_eq!(GraphSchema::from_yaml(&s.to_yaml()).unwrap(), s);
        }
    }

    #[test]
    fn dangling_vertex_type() {
        let doc = format!("{MINIMAL}edges:\n  - {{src: Person, relation: knows, dst: Ghost, orientations: [csr]}}\n");
        let (path, msg) = err_of(&doc);
        assert_eq!(path, "edges[0].dst");
        assert!(msg.contains("dangling vertex type"), "{msg}");
    }

    #[test]
    fn unknown_datatype_names_key_path() {
        let doc = MEDICAL.replace("{ name: age, type: int64 }", "{ name: age, type: int32 }");
        let (path, msg) = err_of(&doc);
        assert_eq!(path, "vertices[0].properties[1].type");
        assert!(msg.contains("int32"));
    }

    #[test]
    fn duplicates_rejected() {
        let doc = MINIMAL.replace("[Asian, Enrollee]", "[Asian, Asian]");
        assert_eq!(err_of(&doc).0, "vertices[0].labels[1]");

        let doc = format!("{MINIMAL}  - type: Person\n    partition_size: 1024\n");
        let (path, msg) = err_of(&doc);
        assert_eq!(path, "vertices[1].type");
        assert!(msg.contains("duplicate"));

        let doc = MEDICAL.replace(
            "{ name: name, type: string }",
            "{ name: name, type: string }\n      - { name: name, type: int64 }",
        );
        assert_eq!(err_of(&doc).0, "vertices[1].properties[1].name");
    }

    #[test]
    fn label_property_overlap_rejected() {
        let doc = MEDICAL.replace("[Asian, Enrollee]", "[Asian, age]");
        let (path, msg) = err_of(&doc);
        assert_eq!(path, "vertices[0].labels[1]");
        assert!(msg.contains("collides"));
    }

    #[test]
    fn partition_size_must_align_with_pages() {
        let doc = MINIMAL.replace("partition_size: 1024", "partition_size: 1000");
        assert_eq!(err_of(&doc).0, "vertices[0].partition_size");
        let doc = MINIMAL.replace("partition_size: 1024", "partition_size: 0");
        assert_eq!(err_of(&doc).0, "vertices[0].partition_size");
    }

    #[test]
    fn orientations_must_be_nonempty_and_known() {
        let doc = MEDICAL.replace("[csr, csc]", "[]");
        assert_eq!(err_of(&doc).0, "edges[0].orientations");
        let doc = MEDICAL.replace("[csr, csc]", "[csr, coo]");
        assert_eq!(err_of(&doc).0, "edges[0].orientations[1]");
    }

    #[test]
    fn parse_failures_carry_paths() {
        let doc = MINIMAL.replace("partition_size: 1024", "partition_size: lots");
        assert_eq!(err_of(&doc).0, "vertices[0].partition_size");
        let (path, _) = err_of("name: [unclosed");
        assert!(!path.is_empty());
        let doc = format!("{MINIMAL}extra: 1\n");
        assert!(err_of(&doc).1.contains("extra"));
    }

    #[test]
    fn unsupported_version_rejected() {
        let doc = MINIMAL.replace("format_version: 1", "format_version: 2");
        assert_eq!(err_of(&doc).0, "format_version");
    }

    #[test]
    fn bad_identifiers_rejected() {
        let doc = MINIMAL.replace("[Asian, Enrollee]", "[Asian, \"Non Enrollee\"]");
        assert_eq!(err_of(&doc).0, "vertices[0].labels[1]");
    }
}
