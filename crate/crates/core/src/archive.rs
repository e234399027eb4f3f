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

//! Read access to an archive directory.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::colstore::{ColumnFile, ColumnValues, PhysicalType};
use crate::error::{GarError, Result};
use crate::labels::{filter_complex, FilterOutcome, IntervalLabelColumn, LabelExpr};
use crate::schema::{load_schema, EdgeTypeSchema, GraphSchema, Orientation, VertexTypeSchema};
use crate::topology::EdgeTopology;

/// Relative paths of every file in the archive tree.
pub mod layout {
    use std::path::PathBuf;

    use crate::schema::Orientation;

    pub const METADATA_FILE: &str = "_graph.yaml";

    pub fn vertex_dir(vertex_type: &str) -> PathBuf {
        PathBuf::from("vertex").join(vertex_type)
    }

    pub fn vertex_key(vertex_type: &str) -> PathBuf {
        vertex_dir(vertex_type).join("key.gar")
    }

    pub fn vertex_property(vertex_type: &str, property: &str) -> PathBuf {
        vertex_dir(vertex_type).join(format!("prop_{property}.gar"))
    }

    pub fn vertex_label(vertex_type: &str, label: &str) -> PathBuf {
        vertex_dir(vertex_type).join(format!("label_{label}.gar"))
    }

    pub fn edge_dir(edge_type: &str, orientation: Orientation) -> PathBuf {
        PathBuf::from("edge").join(edge_type).join(orientation.as_str())
    }

    /// `src`, `dst` or `offset` column of one orientation.
    pub fn edge_file(edge_type: &str, orientation: Orientation, column: &str) -> PathBuf {
        edge_dir(edge_type, orientation).join(format!("{column}.gar"))
    }

    pub fn edge_property(edge_type: &str, orientation: Orientation, property: &str) -> PathBuf {
        edge_dir(edge_type, orientation).join(format!("prop_{property}.gar"))
    }
}

#[derive(Debug)]
pub struct Archive {
    dir: PathBuf,
    root: PathBuf,
    schema: GraphSchema,
    vertex_counts: HashMap<String, u64>,
}

impl Archive {
    pub fn open(dir: impl AsRef<Path>) -> Result<Archive> {
        let dir = dir.as_ref().to_path_buf();
        let meta = dir.join(layout::METADATA_FILE);
        if !meta.is_file() {
            return Err(GarError::NoMetadata(dir));
        }
        let schema = load_schema(&meta)?;
        let root = schema.data_root(&dir);
        let mut vertex_counts = HashMap::new();
        for vt in &schema.vertex_types {
            let key = ColumnFile::open(root.join(layout::vertex_key(&vt.type_name)))?;
            vertex_counts.insert(vt.type_name.clone(), key.total_rows());
        }
        Ok(Archive {
            dir,
            root,
            schema,
            vertex_counts,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Directory the column paths are relative to.
    pub fn data_root(&self) -> &Path {
        &self.root
    }

    pub fn schema(&self) -> &GraphSchema {
        &self.schema
    }

    pub fn page_rows(&self) -> usize {
        self.schema.page_rows
    }

    pub fn vertex_schema(&self, vertex_type: &str) -> Result<&VertexTypeSchema> {
        self.schema.vertex_type(vertex_type).ok_or_else(|| GarError::Unknown {
            kind: "vertex type",
            name: vertex_type.to_string(),
        })
    }

    /// Looks an edge type up by its full `<Src>_<Rel>_<Dst>` name or, when
    /// unambiguous, by relation name alone.
    pub fn edge_schema(&self, name: &str) -> Result<&EdgeTypeSchema> {
        if let Some(e) = self.schema.edge_type(name) {
            return Ok(e);
        }
        let mut by_relation = self.schema.edge_types.iter().filter(|e| e.relation == name);
        match (by_relation.next(), by_relation.next()) {
            (Some(e), None) => Ok(e),
            _ => Err(GarError::Unknown {
                kind: "edge type",
                name: name.to_string(),
            }),
        }
    }

    pub fn vertex_count(&self, vertex_type: &str) -> Result<u64> {
        self.vertex_schema(vertex_type)?;
        Ok(self.vertex_counts[vertex_type])
    }

    fn open_column(&self, rel: PathBuf) -> Result<ColumnFile> {
        ColumnFile::open(self.root.join(rel))
    }

    pub fn key_column(&self, vertex_type: &str) -> Result<ColumnFile> {
        self.vertex_schema(vertex_type)?;
        self.open_column(layout::vertex_key(vertex_type))
    }

    /// External keys in internal-ID order.
    pub fn external_keys(&self, vertex_type: &str) -> Result<Vec<String>> {
        match self.key_column(vertex_type)?.read_all()? {
            ColumnValues::String(keys) => Ok(keys),
            other => Err(GarError::TypeMismatch {
                expected: PhysicalType::String,
                found: other.physical_type(),
            }),
        }
    }

    pub fn property_column(&self, vertex_type: &str, property: &str) -> Result<ColumnFile> {
        let vt = self.vertex_schema(vertex_type)?;
        if vt.property(property).is_none() {
            return Err(GarError::Unknown {
                kind: "property",
                name: property.to_string(),
            });
        }
        self.open_column(layout::vertex_property(vertex_type, property))
    }

    pub fn label_column(&self, vertex_type: &str, label: &str) -> Result<ColumnFile> {
        let vt = self.vertex_schema(vertex_type)?;
        if !vt.has_label(label) {
            return Err(GarError::UnknownLabel(label.to_string()));
        }
        self.open_column(layout::vertex_label(vertex_type, label))
    }

    pub fn label_intervals(&self, vertex_type: &str, label: &str) -> Result<IntervalLabelColumn> {
        IntervalLabelColumn::from_column(label, &self.label_column(vertex_type, label)?)
    }

    /// Filters `vertex_type` by a label expression, loading only the labels it names.
    pub fn filter(&self, vertex_type: &str, expr: &LabelExpr) -> Result<FilterOutcome> {
        let cols = expr
            .atoms()
            .into_iter()
            .map(|l| self.label_intervals(vertex_type, l))
            .collect::<Result<Vec<_>>>()?;
        filter_complex(&cols, expr)
    }

    pub fn topology(&self, edge_type: &str, orientation: Orientation) -> Result<EdgeTopology> {
        let et = self.edge_schema(edge_type)?;
        if !et.has_orientation(orientation) {
            return Err(GarError::MissingOrientation(orientation.as_str()));
        }
        let value_count = self.vertex_count(et.value_type(orientation))?;
        let dir = self.root.join(layout::edge_dir(&et.name(), orientation));
        let topo = EdgeTopology::open(dir, orientation, value_count)?;
        let key_count = self.vertex_count(et.key_type(orientation))?;
        if topo.key_count() != key_count {
            return Err(GarError::Corrupt(format!(
                "offset column indexes {} vertices but {} has {key_count}",
                topo.key_count(),
                et.key_type(orientation)
            )));
        }
        Ok(topo)
    }
}
