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

//! Building archives from CSV tables.
//!
//! Vertex files carry the external key in their first column, then property
//! columns and an optional `labels` column of `;`-separated label names.
//! Edge files carry the source and destination keys in their first two
//! columns, then edge property columns. Internal IDs follow sorted external
//! key order, numeric when every key is an integer.

pub mod synthetic;

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

pub use synthetic::{generate_synthetic, synthetic_schema, write_synthetic_archive, SyntheticGraph, SyntheticParams};

use crate::archive::layout;
use crate::colstore::{write_column, Codec, ColumnValues};
use crate::error::{GarError, Result};
use crate::schema::{save_schema, DataType, EdgeTypeSchema, GraphSchema, PropertySchema, VertexTypeSchema};
use crate::topology::{build_topology, BuildTimings, EdgeTopology};

/// Bijection between external keys and internal IDs of one vertex type.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IdMap {
    keys: Vec<String>,
    index: HashMap<String, u64>,
}

impl IdMap {
    /// Assigns IDs in sorted key order. Returns the map and, for each internal
    /// ID, the position of its key in `keys`. A duplicate key is returned as
    /// the error value.
    pub fn assign(keys: &[String]) -> std::result::Result<(IdMap, Vec<usize>), String> {
        let numeric: Option<Vec<i64>> = keys.iter().map(|k| k.trim().parse::<i64>().ok()).collect();
        let mut order: Vec<usize> = (0..keys.len()).collect();
        match &numeric {
            Some(nums) => order.sort_by_key(|&i| nums[i]),
            None => order.sort_by(|&a, &b| keys[a].cmp(&keys[b])),
        }
        let mut map = IdMap {
            keys: Vec::with_capacity(keys.len()),
            index: HashMap::with_capacity(keys.len()),
        };
        for &i in &order {
            let id = map.keys.len() as u64;
            if map.index.insert(keys[i].clone(), id).is_some() {
                return Err(keys[i].clone());
            }
            map.keys.push(keys[i].clone());
        }
        if let Some(nums) = &numeric {
            // numerically equal spellings such as "7" and "07"
            if let Some(w) = order.windows(2).find(|w| nums[w[0]] == nums[w[1]]) {
                return Err(keys[w[1]].clone());
            }
        }
        Ok((map, order))
    }

    /// Rebuilds the map from keys already in internal-ID order.
    pub fn from_ordered_keys(keys: Vec<String>) -> IdMap {
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i as u64)).collect();
        IdMap { keys, index }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn internal_id(&self, key: &str) -> Option<u64> {
        self.index.get(key).copied()
    }

    pub fn external_key(&self, id: u64) -> Option<&str> {
        self.keys.get(id as usize).map(String::as_str)
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }
}

/// Vertex columns in internal-ID order.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexColumns {
    pub keys: Vec<String>,
    pub properties: Vec<(String, ColumnValues)>,
    pub labels: Vec<(String, Vec<bool>)>,
}

/// Edges as internal-ID pairs with per-edge property columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EdgeColumns {
    pub edges: Vec<(u64, u64)>,
    pub properties: Vec<(String, ColumnValues)>,
}

/// Per-stage timings and counts of an archive build.
#[derive(Debug, Clone, Default)]
pub struct ImportReport {
    pub vertex_counts: Vec<(String, u64)>,
    pub edge_counts: Vec<(String, u64)>,
    pub vertex_write: Duration,
    pub edges: BuildTimings,
}

fn input_err(file: &Path, line: u64, message: impl Into<String>) -> GarError {
    GarError::Input {
        file: file.display().to_string(),
        line,
        message: message.into(),
    }
}

fn empty_values(dt: DataType) -> ColumnValues {
    ColumnValues::empty(dt.physical())
}

fn push_value(col: &mut ColumnValues, dt: DataType, raw: &str) -> std::result::Result<(), String> {
    let bad = || format!("cannot parse `{raw}` as {}", dt.as_str());
    match col {
        ColumnValues::Int64(v) => v.push(raw.trim().parse().map_err(|_| bad())?),
        ColumnValues::Float64(v) => v.push(raw.trim().parse().map_err(|_| bad())?),
        ColumnValues::String(v) => v.push(raw.to_string()),
        ColumnValues::Bool(v) => v.push(match raw.trim().to_ascii_lowercase().as_str() {
            "true" | "1" => true,
            "false" | "0" => false,
            _ => return Err(bad()),
        }),
    }
    Ok(())
}

fn open_csv(path: &Path) -> Result<(csv::Reader<fs::File>, csv::StringRecord)> {
    let file = fs::File::open(path).map_err(|e| GarError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let header = reader.headers().map_err(|e| input_err(path, 1, e.to_string()))?.clone();
    if header.is_empty() {
        return Err(input_err(path, 1, "missing header row"));
    }
    Ok((reader, header))
}

/// `(csv column, property index)` pairs and the `labels` column, if any.
type Slots = (Vec<(usize, usize)>, Option<usize>);

/// Maps header columns after `skip` to declared properties, requiring all of them.
fn property_slots(
    path: &Path,
    header: &csv::StringRecord,
    skip: usize,
    declared: &[PropertySchema],
    allow_labels: bool,
) -> Result<Slots> {
    let mut slots = Vec::new();
    let mut labels = None;
    for (col, name) in header.iter().enumerate().skip(skip) {
        let name = name.trim();
        if allow_labels && name == "labels" {
            labels = Some(col);
        } else if let Some(p) = declared.iter().position(|p| p.name == name) {
            if slots.iter().any(|&(_, q)| q == p) {
                return Err(input_err(path, 1, format!("column `{name}` appears twice")));
            }
            slots.push((col, p));
        } else {
            return Err(input_err(
                path,
                1,
                format!("column `{name}` is not a declared property"),
            ));
        }
    }
    Ok((slots, labels))
}

/// Reads a vertex CSV into columns in internal-ID order.
pub fn read_vertices(path: impl AsRef<Path>, vt: &VertexTypeSchema) -> Result<(IdMap, VertexColumns)> {
    let path = path.as_ref();
    let (mut reader, header) = open_csv(path)?;
    let key_name = header.get(0).unwrap_or("").trim().to_string();
    let key_property = vt.properties.iter().position(|p| p.name == key_name);
    let (slots, labels_col) = property_slots(path, &header, 1, &vt.properties, true)?;
    for (i, p) in vt.properties.iter().enumerate() {
        if Some(i) != key_property && !slots.iter().any(|&(_, q)| q == i) {
            return Err(input_err(path, 1, format!("missing column for property `{}`", p.name)));
        }
    }

    let mut keys = Vec::new();
    let mut props: Vec<ColumnValues> = vt.properties.iter().map(|p| empty_values(p.datatype)).collect();
    let mut labels: Vec<Vec<bool>> = vec![Vec::new(); vt.candidate_labels.len()];
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            input_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let key = record.get(0).unwrap_or("").to_string();
        let mut fields: Vec<(usize, &str)> = slots.iter().map(|&(c, p)| (p, record.get(c).unwrap_or(""))).collect();
        if let Some(p) = key_property {
            fields.push((p, key.as_str()));
        }
        for (p, raw) in fields {
            let prop = &vt.properties[p];
            push_value(&mut props[p], prop.datatype, raw)
                .map_err(|m| input_err(path, line, format!("column `{}`: {m}", prop.name)))?;
        }
        let mut row = vec![false; vt.candidate_labels.len()];
        if let Some(c) = labels_col {
            for label in record
                .get(c)
                .unwrap_or("")
                .split(';')
                .map(str::trim)
                .filter(|l| !l.is_empty())
            {
                let i = vt
                    .candidate_labels
                    .iter()
                    .position(|l| l == label)
                    .ok_or_else(|| input_err(path, line, format!("unknown label `{label}`")))?;
                row[i] = true;
            }
        }
        for (col, v) in labels.iter_mut().zip(row) {
            col.push(v);
        }
        keys.push(key);
    }

    let (map, order) =
        IdMap::assign(&keys).map_err(|dup| input_err(path, 0, format!("duplicate external key `{dup}`")))?;
    let columns = VertexColumns {
        keys: map.keys().to_vec(),
        properties: vt
            .properties
            .iter()
            .zip(props)
            .map(|(p, v)| (p.name.clone(), v.permute(&order)))
            .collect(),
        labels: vt
            .candidate_labels
            .iter()
            .zip(labels)
            .map(|(l, v)| (l.clone(), order.iter().map(|&i| v[i]).collect()))
            .collect(),
    };
    Ok((map, columns))
}

/// Writes the key, property (PLAIN) and label (RLE_BOOL) columns of one vertex type.
pub fn write_vertex_columns(root: &Path, vt: &VertexTypeSchema, cols: &VertexColumns, page_rows: usize) -> Result<()> {
    let dir = root.join(layout::vertex_dir(&vt.type_name));
    fs::create_dir_all(&dir).map_err(|e| GarError::io(&dir, e))?;
    let n = cols.keys.len();
    write_column(
        root.join(layout::vertex_key(&vt.type_name)),
        &ColumnValues::String(cols.keys.clone()),
        Codec::Plain,
        page_rows,
    )?;
    for (name, values) in &cols.properties {
        if values.len() != n {
            return Err(GarError::PropertyLength {
                name: name.clone(),
                expected: n,
                found: values.len(),
            });
        }
        write_column(
            root.join(layout::vertex_property(&vt.type_name, name)),
            values,
            Codec::Plain,
            page_rows,
        )?;
    }
    for (label, values) in &cols.labels {
        write_column(
            root.join(layout::vertex_label(&vt.type_name, label)),
            &ColumnValues::Bool(values.clone()),
            Codec::RleBool,
            page_rows,
        )?;
    }
    Ok(())
}

/// Reads an edge CSV, resolving endpoints through the vertex ID maps.
pub fn read_edges(
    path: impl AsRef<Path>,
    et: &EdgeTypeSchema,
    src_map: &IdMap,
    dst_map: &IdMap,
) -> Result<EdgeColumns> {
    let path = path.as_ref();
    let (mut reader, header) = open_csv(path)?;
    if header.len() < 2 {
        return Err(input_err(path, 1, "edge files need source and destination key columns"));
    }
    let (slots, _) = property_slots(path, &header, 2, &et.properties, false)?;
    if slots.len() != et.properties.len() {
        let missing = et
            .properties
            .iter()
            .enumerate()
            .find(|(i, _)| !slots.iter().any(|&(_, q)| q == *i))
            .map(|(_, p)| p.name.clone())
            .unwrap_or_default();
        return Err(input_err(path, 1, format!("missing column for property `{missing}`")));
    }
    let mut out = EdgeColumns {
        edges: Vec::new(),
        properties: et
            .properties
            .iter()
            .map(|p| (p.name.clone(), empty_values(p.datatype)))
            .collect(),
    };
    let mut seen: HashMap<(u64, u64), u64> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            input_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let resolve = |map: &IdMap, col: usize, ty: &str| {
            let key = record.get(col).unwrap_or("");
            map.internal_id(key)
                .ok_or_else(|| input_err(path, line, format!("unknown {ty} vertex `{key}`")))
        };
        let s = resolve(src_map, 0, &et.src_type)?;
        let d = resolve(dst_map, 1, &et.dst_type)?;
        if let Some(first) = seen.insert((s, d), line) {
            return Err(input_err(
                path,
                line,
                format!(
                    "duplicate edge ({}, {}), first seen on line {first}",
                    record.get(0).unwrap_or(""),
                    record.get(1).unwrap_or("")
                ),
            ));
        }
        out.edges.push((s, d));
        for &(c, p) in &slots {
            let prop = &et.properties[p];
            push_value(&mut out.properties[p].1, prop.datatype, record.get(c).unwrap_or(""))
                .map_err(|m| input_err(path, line, format!("column `{}`: {m}", prop.name)))?;
        }
    }
    Ok(out)
}

/// Builds and saves every declared orientation of an edge type.
pub fn write_edge_columns(
    root: &Path,
    et: &EdgeTypeSchema,
    cols: &EdgeColumns,
    src_count: u64,
    dst_count: u64,
    page_rows: usize,
) -> Result<(Vec<EdgeTopology>, BuildTimings)> {
    let mut timings = BuildTimings::default();
    let mut topologies = Vec::new();
    for &o in &et.orientations {
        let (topo, t) = build_topology(&cols.edges, &cols.properties, o, src_count, dst_count, page_rows)?;
        let started = Instant::now();
        topo.save(root.join(layout::edge_dir(&et.name(), o)))?;
        timings += BuildTimings {
            write: t.write + started.elapsed(),
            ..t
        };
        topologies.push(topo);
    }
    Ok((topologies, timings))
}

/// Imports one vertex CSV into an archive data root.
pub fn import_vertices(path: impl AsRef<Path>, vt: &VertexTypeSchema, root: &Path, page_rows: usize) -> Result<IdMap> {
    let (map, cols) = read_vertices(path, vt)?;
    write_vertex_columns(root, vt, &cols, page_rows)?;
    Ok(map)
}

/// Imports one edge CSV, producing a topology per declared orientation.
pub fn import_edges(
    path: impl AsRef<Path>,
    et: &EdgeTypeSchema,
    idmaps: &HashMap<String, IdMap>,
    root: &Path,
    page_rows: usize,
) -> Result<(Vec<EdgeTopology>, BuildTimings)> {
    let lookup = |t: &str| {
        idmaps.get(t).ok_or_else(|| GarError::Unknown {
            kind: "vertex type",
            name: t.to_string(),
        })
    };
    let (src_map, dst_map) = (lookup(&et.src_type)?, lookup(&et.dst_type)?);
    let cols = read_edges(path, et, src_map, dst_map)?;
    write_edge_columns(root, et, &cols, src_map.len() as u64, dst_map.len() as u64, page_rows)
}

/// Builds a complete archive at `out`. Types without an input file become
/// empty tables.
pub fn build_archive(
    schema: &GraphSchema,
    vertex_inputs: &[(String, PathBuf)],
    edge_inputs: &[(String, PathBuf)],
    out: impl AsRef<Path>,
) -> Result<ImportReport> {
    let out = out.as_ref();
    for (name, _) in vertex_inputs {
        if schema.vertex_type(name).is_none() {
            return Err(GarError::Unknown {
                kind: "vertex type",
                name: name.clone(),
            });
        }
    }
    for (name, _) in edge_inputs {
        if schema.edge_type(name).is_none() {
            return Err(GarError::Unknown {
                kind: "edge type",
                name: name.clone(),
            });
        }
    }
    let root = schema.data_root(out);
    fs::create_dir_all(&root).map_err(|e| GarError::io(&root, e))?;
    let page_rows = schema.page_rows;
    let mut report = ImportReport::default();

    let mut idmaps = HashMap::new();
    for vt in &schema.vertex_types {
        let input = vertex_inputs.iter().find(|(n, _)| n == &vt.type_name).map(|(_, p)| p);
        let (map, cols) = match input {
            Some(p) => read_vertices(p, vt)?,
            None => (
                IdMap::default(),
                VertexColumns {
                    keys: Vec::new(),
                    properties: vt
                        .properties
                        .iter()
                        .map(|p| (p.name.clone(), empty_values(p.datatype)))
                        .collect(),
                    labels: vt.candidate_labels.iter().map(|l| (l.clone(), Vec::new())).collect(),
                },
            ),
        };
        let started = Instant::now();
        write_vertex_columns(&root, vt, &cols, page_rows)?;
        report.vertex_write += started.elapsed();
        report.vertex_counts.push((vt.type_name.clone(), map.len() as u64));
        idmaps.insert(vt.type_name.clone(), map);
    }

    for et in &schema.edge_types {
        let name = et.name();
        let cols = match edge_inputs.iter().find(|(n, _)| n == &name) {
            Some((_, p)) => read_edges(p, et, &idmaps[&et.src_type], &idmaps[&et.dst_type])?,
            None => EdgeColumns {
                edges: Vec::new(),
                properties: et
                    .properties
                    .iter()
                    .map(|p| (p.name.clone(), empty_values(p.datatype)))
                    .collect(),
            },
        };
        let (src_n, dst_n) = (idmaps[&et.src_type].len() as u64, idmaps[&et.dst_type].len() as u64);
        let (_, t) = write_edge_columns(&root, et, &cols, src_n, dst_n, page_rows)?;
        report.edges += t;
        report.edge_counts.push((name, cols.edges.len() as u64));
    }

    save_schema(schema, out.join(layout::METADATA_FILE))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn numeric_keys_sort_numerically() {
        let (map, order) = IdMap::assign(&strings(&["10", "9", "100"])).unwrap();
        assert_eq!(map.keys(), &strings(&["9", "10", "100"]));
        assert_eq!(order, vec![1, 0, 2]);
        assert_eq!(map.internal_id("100"), Some(2));
        assert_eq!(map.external_key(0), Some("9"));
    }

    #[test]
    fn mixed_keys_sort_lexicographically() {
        let (map, _) = IdMap::assign(&strings(&["b", "10", "a"])).unwrap();
        assert_eq!(map.keys(), &strings(&["10", "a", "b"]));
    }

    #[test]
    fn duplicate_keys_reported() {
        assert_eq!(IdMap::assign(&strings(&["x", "y", "x"])).unwrap_err(), "x");
        assert!(IdMap::assign(&strings(&["7", "07"])).is_err());
    }
}
