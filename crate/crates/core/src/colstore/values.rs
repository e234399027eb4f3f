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

use std::fmt;
use std::ops::Range;

use super::PhysicalType;

/// A typed, owned run of column values.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnValues {
    Int64(Vec<i64>),
    Float64(Vec<f64>),
    String(Vec<String>),
    Bool(Vec<bool>),
}

/// A single cell value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int64(i64),
    Float64(f64),
    String(String),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int64(v) => write!(f, "{v}"),
            Value::Float64(v) => write!(f, "{v}"),
            Value::String(v) => f.write_str(v),
            Value::Bool(v) => write!(f, "{v}"),
        }
    }
}

impl ColumnValues {
    pub fn empty(physical: PhysicalType) -> Self {
        match physical {
            PhysicalType::Int64 => ColumnValues::Int64(Vec::new()),
            PhysicalType::Float64 => ColumnValues::Float64(Vec::new()),
            PhysicalType::String => ColumnValues::String(Vec::new()),
            PhysicalType::Bool => ColumnValues::Bool(Vec::new()),
        }
    }

    pub fn physical_type(&self) -> PhysicalType {
        match self {
            ColumnValues::Int64(_) => PhysicalType::Int64,
            ColumnValues::Float64(_) => PhysicalType::Float64,
            ColumnValues::String(_) => PhysicalType::String,
            ColumnValues::Bool(_) => PhysicalType::Bool,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ColumnValues::Int64(v) => v.len(),
            ColumnValues::Float64(v) => v.len(),
            ColumnValues::String(v) => v.len(),
            ColumnValues::Bool(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: usize) -> Option<Value> {
        match self {
            ColumnValues::Int64(v) => v.get(index).map(|x| Value::Int64(*x)),
            ColumnValues::Float64(v) => v.get(index).map(|x| Value::Float64(*x)),
            ColumnValues::String(v) => v.get(index).map(|x| Value::String(x.clone())),
            ColumnValues::Bool(v) => v.get(index).map(|x| Value::Bool(*x)),
        }
    }

    /// Copies out `range`. Panics if the range is out of bounds.
    pub fn slice(&self, range: Range<usize>) -> ColumnValues {
        match self {
            ColumnValues::Int64(v) => ColumnValues::Int64(v[range].to_vec()),
            ColumnValues::Float64(v) => ColumnValues::Float64(v[range].to_vec()),
            ColumnValues::String(v) => ColumnValues::String(v[range].to_vec()),
            ColumnValues::Bool(v) => ColumnValues::Bool(v[range].to_vec()),
        }
    }

    /// Appends `other`, which must have the same physical type.
    pub(crate) fn extend_from(&mut self, other: ColumnValues) {
        match (self, other) {
            (ColumnValues::Int64(a), ColumnValues::Int64(b)) => a.extend(b),
            (ColumnValues::Float64(a), ColumnValues::Float64(b)) => a.extend(b),
            (ColumnValues::String(a), ColumnValues::String(b)) => a.extend(b),
            (ColumnValues::Bool(a), ColumnValues::Bool(b)) => a.extend(b),
            (a, b) => panic!(
                "cannot append {:?} values to {:?} column",
                b.physical_type(),
                a.physical_type()
            ),
        }
    }

    /// Reorders values so that output row `i` holds input row `order[i]`.
    pub fn permute(&self, order: &[usize]) -> ColumnValues {
        match self {
            ColumnValues::Int64(v) => ColumnValues::Int64(order.iter().map(|&i| v[i]).collect()),
            ColumnValues::Float64(v) => ColumnValues::Float64(order.iter().map(|&i| v[i]).collect()),
            ColumnValues::String(v) => ColumnValues::String(order.iter().map(|&i| v[i].clone()).collect()),
            ColumnValues::Bool(v) => ColumnValues::Bool(order.iter().map(|&i| v[i]).collect()),
        }
    }

    pub fn as_int64(&self) -> Option<&[i64]> {
        match self {
            ColumnValues::Int64(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<&[bool]> {
        match self {
            ColumnValues::Bool(v) => Some(v),
            _ => None,
        }
    }
}
