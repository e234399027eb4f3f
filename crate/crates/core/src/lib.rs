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

//! Columnar storage for labeled property graphs.
//!
//! An archive is a directory holding a `_graph.yaml` schema and one column
//! file per vertex property, vertex label and edge table column. Edge tables
//! are sorted per orientation and indexed by an offset column; neighbor IDs
//! are delta encoded and decode straight into page-aligned bitmaps
//! ([`Pac`]) that drive property and label fetches. Labels are stored as run
//! boundaries and filtered without expanding rows.

pub mod archive;
pub mod bench;
pub mod colstore;
pub mod error;
pub mod ingest;
pub mod labels;
pub mod oracle;
pub mod pac;
pub mod properties;
pub mod schema;
pub mod topology;

pub use archive::Archive;
pub use colstore::{Codec, ColumnFile, ColumnStats, ColumnValues, PhysicalType, Value, DEFAULT_PAGE_ROWS};
pub use error::{GarError, Result};
pub use ingest::{build_archive, generate_synthetic, IdMap, SyntheticParams};
pub use labels::{
    filter_complex, filter_simple, intervals_to_pac, parse_label_expr, IntervalLabelColumn, IntervalSet, LabelExpr,
};
pub use pac::Pac;
pub use properties::{fetch_by_pac, fetch_labels_by_pac};
pub use schema::{validate_layout, DataType, GraphSchema, Orientation};
pub use topology::{build_topology, EdgeTopology};
