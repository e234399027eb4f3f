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

use std::path::PathBuf;

use thiserror::Error;

use crate::colstore::{Codec, PhysicalType};

/// Errors raised anywhere in the archive toolkit.
#[derive(Debug, Error)]
pub enum GarError {
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("no metadata file `_graph.yaml` under {}", .0.display())]
    NoMetadata(PathBuf),

    #[error("codec {codec:?} cannot store {physical:?} values")]
    IncompatibleCodec { codec: Codec, physical: PhysicalType },

    #[error("expected {expected:?} column, found {found:?}")]
    TypeMismatch {
        expected: PhysicalType,
        found: PhysicalType,
    },

    #[error("corrupt column data: {0}")]
    Corrupt(String),

    #[error("row range {start}..{end} out of bounds for {total} rows")]
    RangeOutOfBounds { start: u64, end: u64, total: u64 },

    #[error("invalid page row capacity {0}: must be a power of two in 1..=65536")]
    InvalidPageRows(usize),

    #[error("page row capacity {requested} does not match column page layout")]
    PageRowsMismatch { requested: usize },

    #[error("vertex {vertex} out of range ({count} vertices)")]
    VertexOutOfRange { vertex: u64, count: u64 },

    #[error("edge endpoint {id} out of range ({count} {side} vertices)")]
    EndpointOutOfRange { id: u64, count: u64, side: &'static str },

    #[error("duplicate edge ({src}, {dst})")]
    DuplicateEdge { src: u64, dst: u64 },

    #[error("property column `{name}` has {found} rows, expected {expected}")]
    PropertyLength {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("member {id} out of range ({total} rows)")]
    MemberOutOfRange { id: u64, total: u64 },

    #[error("gap run delta {delta} at position {index} is below 1")]
    InvalidDelta { index: usize, delta: i64 },

    #[error("fast bitmap decode not applicable for min_delta {min_delta}, bit width {bit_width}")]
    FastPathNotApplicable { min_delta: i64, bit_width: u8 },

    #[error("syntax error at column {column}: {message}")]
    ExprSyntax { column: usize, message: String },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("label columns disagree on vertex count ({expected} vs {found})")]
    VertexCountMismatch { expected: u64, found: u64 },

    #[error("interval {start}..{end} out of range for {n} rows")]
    IntervalOutOfRange { start: u64, end: u64, n: u64 },

    #[error("{file}: line {line}: {message}")]
    Input { file: String, line: u64, message: String },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("orientation {0} was not materialized for this edge type")]
    MissingOrientation(&'static str),

    #[error("infeasible request: {0}")]
    Infeasible(String),
}

impl GarError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        GarError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        GarError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, GarError>;
