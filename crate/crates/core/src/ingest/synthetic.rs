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

//! Seeded synthetic graphs with tunable edge locality and clustered labels.

use std::collections::HashSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{write_edge_columns, write_vertex_columns, EdgeColumns, VertexColumns};
use crate::archive::layout;
use crate::colstore::ColumnValues;
use crate::error::{GarError, Result};
use crate::schema::{
    save_schema, DataType, EdgeTypeSchema, GraphSchema, Orientation, PropertySchema, VertexTypeSchema,
};
use crate::topology::BuildTimings;

pub const SYNTHETIC_VERTEX_TYPE: &str = "Person";
pub const SYNTHETIC_EDGE_TYPE: &str = "Person_knows_Person";

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticParams {
    pub vertices: u64,
    pub edges: u64,
    /// Fraction of edges whose destination lies in the source's window.
    pub locality: f64,
    pub window: u64,
    pub labels: usize,
    /// Mean length of a label run, in vertices.
    pub mean_run: u64,
    pub seed: u64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            vertices: 10_000,
            edges: 100_000,
            locality: 0.9,
            window: 16,
            labels: 4,
            mean_run: 256,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticGraph {
    pub params: SyntheticParams,
    /// Directed `(src, dst)` pairs in generation order, no duplicates.
    pub edges: Vec<(u64, u64)>,
    pub names: Vec<String>,
    pub scores: Vec<i64>,
    pub labels: Vec<(String, Vec<bool>)>,
}

impl SyntheticGraph {
    pub fn label_names(&self) -> Vec<String> {
        self.labels.iter().map(|(l, _)| l.clone()).collect()
    }
}

fn label_runs(rng: &mut ChaCha8Rng, n: u64, mean_run: u64) -> Vec<bool> {
    let mut out = Vec::with_capacity(n as usize);
    let mut value = rng.gen_bool(0.5);
    let max_run = (2 * mean_run.max(1)).max(2);
    while (out.len() as u64) < n {
        let run = rng.gen_range(1..max_run).min(n - out.len() as u64);
        out.extend(std::iter::repeat_n(value, run as usize));
        value = !value;
    }
    out
}

/// Generates a graph. The same parameters always give the same graph.
pub fn generate_synthetic(params: &SyntheticParams) -> Result<SyntheticGraph> {
    let (n, m) = (params.vertices, params.edges);
    if !(0.0..=1.0).contains(&params.locality) {
        return Err(GarError::Infeasible(format!(
            "locality {} outside [0, 1]",
            params.locality
        )));
    }
    if params.window == 0 {
        return Err(GarError::Infeasible("window must be positive".into()));
    }
    if n.checked_mul(n).is_some_and(|cap| m > cap / 2) {
        return Err(GarError::Infeasible(format!(
            "{m} edges over {n} vertices is too dense to sample without duplicates"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let w = params.window.min(n);
    let mut seen = HashSet::with_capacity(m as usize);
    let mut edges = Vec::with_capacity(m as usize);
    let mut attempts = 0u64;
    let cap = 64 * m + 1024;
    while (edges.len() as u64) < m {
        attempts += 1;
        if attempts > cap {
            return Err(GarError::Infeasible(format!(
                "gave up after {cap} draws with {} of {m} edges placed",
                edges.len()
            )));
        }
        let src = rng.gen_range(0..n);
        let dst = if rng.gen_bool(params.locality) {
            let base = src.min(n - w);
            base + rng.gen_range(0..w)
        } else {
            rng.gen_range(0..n)
        };
        if seen.insert((src, dst)) {
            edges.push((src, dst));
        }
    }
    let names = (0..n).map(|i| format!("person_{i}")).collect();
    let scores = (0..n).map(|_| rng.gen_range(0..1000)).collect();
    let labels = (0..params.labels)
        .map(|i| (format!("L{i}"), label_runs(&mut rng, n, params.mean_run)))
        .collect();
    Ok(SyntheticGraph {
        params: params.clone(),
        edges,
        names,
        scores,
        labels,
    })
}

/// Schema of a synthetic archive: one `Person` type with `name` and `score`
/// properties and one `knows` edge type materialized in both orientations.
pub fn synthetic_schema(graph: &SyntheticGraph, page_rows: usize) -> GraphSchema {
    let mut schema = GraphSchema::new("synthetic");
    schema.page_rows = page_rows;
    schema.vertex_types.push(VertexTypeSchema {
        type_name: SYNTHETIC_VERTEX_TYPE.into(),
        partition_size: (page_rows as u64).max(1 << 16).next_multiple_of(page_rows as u64),
        properties: vec![
            PropertySchema::new("name", DataType::String),
            PropertySchema::new("score", DataType::Int64),
        ],
        candidate_labels: graph.label_names(),
    });
    schema.edge_types.push(EdgeTypeSchema {
        src_type: SYNTHETIC_VERTEX_TYPE.into(),
        relation: "knows".into(),
        dst_type: SYNTHETIC_VERTEX_TYPE.into(),
        properties: Vec::new(),
        orientations: vec![Orientation::Csr, Orientation::Csc],
    });
    schema
}

/// Writes `graph` as an archive under `out`, returning the edge build timings.
pub fn write_synthetic_archive(
    graph: &SyntheticGraph,
    out: impl AsRef<Path>,
    page_rows: usize,
) -> Result<BuildTimings> {
    let out = out.as_ref();
    let schema = synthetic_schema(graph, page_rows);
    schema.validate()?;
    let root = schema.data_root(out);
    let n = graph.params.vertices;
    let vertices = VertexColumns {
        keys: (0..n).map(|i| i.to_string()).collect(),
        properties: vec![
            ("name".into(), ColumnValues::String(graph.names.clone())),
            ("score".into(), ColumnValues::Int64(graph.scores.clone())),
        ],
        labels: graph.labels.clone(),
    };
    write_vertex_columns(&root, &schema.vertex_types[0], &vertices, page_rows)?;
    let edges = EdgeColumns {
        edges: graph.edges.clone(),
        properties: Vec::new(),
    };
    let (_, timings) = write_edge_columns(&root, &schema.edge_types[0], &edges, n, n, page_rows)?;
    save_schema(&schema, out.join(layout::METADATA_FILE))?;
    Ok(timings)
}
