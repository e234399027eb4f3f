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

//! Brute-force reference answers for tests.
//!
//! Everything here works on plain in-memory data and stays deliberately
//! naive. Nothing is shared with the column store, topology or label code.

use crate::labels::LabelExpr;
use crate::schema::Orientation;

/// Neighbors of `v` by linear scan: destinations of `v` for CSR, sources
/// pointing at `v` for CSC. Sorted ascending.
pub fn oracle_neighbors(edges: &[(u64, u64)], v: u64, direction: Orientation) -> Vec<u64> {
    let mut out = Vec::new();
    for &(s, d) in edges {
        match direction {
            Orientation::Csr if s == v => out.push(d),
            Orientation::Csc if d == v => out.push(s),
            _ => {}
        }
    }
    out.sort_unstable();
    out
}

/// Offset index by counting keys: entry `k` is the number of edges whose
/// key is below `k`.
pub fn oracle_offsets(edges: &[(u64, u64)], key_count: u64, direction: Orientation) -> Vec<u64> {
    let mut counts = vec![0u64; key_count as usize];
    for &(s, d) in edges {
        let key = if direction == Orientation::Csr { s } else { d };
        counts[key as usize] += 1;
    }
    let mut out = vec![0u64];
    let mut total = 0;
    for c in counts {
        total += c;
        out.push(total);
    }
    out
}

fn truth(expr: &LabelExpr, table: &[(String, Vec<bool>)], row: usize) -> Option<bool> {
    Some(match expr {
        LabelExpr::Atom(name) => table.iter().find(|(l, _)| l == name)?.1[row],
        LabelExpr::Not(e) => !truth(e, table, row)?,
        LabelExpr::And(a, b) => {
            let x = truth(a, table, row)?;
            let y = truth(b, table, row)?;
            x && y
        }
        LabelExpr::Or(a, b) => {
            let x = truth(a, table, row)?;
            let y = truth(b, table, row)?;
            x || y
        }
    })
}

/// Rows of a materialized label table where `expr` holds, evaluated row by
/// row. `None` if the expression names a label missing from the table.
pub fn oracle_filter(table: &[(String, Vec<bool>)], expr: &LabelExpr) -> Option<Vec<u64>> {
    let n = table.first().map_or(0, |(_, v)| v.len());
    let mut out = Vec::new();
    for row in 0..n {
        if truth(expr, table, row)? {
            out.push(row as u64);
        }
    }
    Some(out)
}

/// First value plus successive differences, then a running sum back, all
/// with two's-complement wrap. True when the values come back unchanged.
pub fn oracle_delta_roundtrip(values: &[i64]) -> bool {
    if values.is_empty() {
        return true;
    }
    let first = values[0];
    let mut diffs = Vec::with_capacity(values.len() - 1);
    for i in 1..values.len() {
        diffs.push(values[i].wrapping_sub(values[i - 1]));
    }
    let mut decoded = vec![first];
    let mut acc = first;
    for d in diffs {
        acc = acc.wrapping_add(d);
        decoded.push(acc);
    }
    decoded == values
}

/// Run boundaries of a boolean sequence by direct comparison of neighbors.
pub fn oracle_runs(values: &[bool]) -> Vec<u64> {
    let mut out = vec![0];
    for i in 1..values.len() {
        if values[i] != values[i - 1] {
            out.push(i as u64);
        }
    }
    if !values.is_empty() {
        out.push(values.len() as u64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_neighbors() {
        let e = [(0, 5), (0, 1), (2, 3)];
        assert_eq!(oracle_neighbors(&e, 0, Orientation::Csr), vec![1, 5]);
        assert_eq!(oracle_neighbors(&e, 5, Orientation::Csc), vec![0]);
        assert!(oracle_neighbors(&[], 0, Orientation::Csr).is_empty());
        assert_eq!(oracle_offsets(&e, 3, Orientation::Csr), vec![0, 2, 2, 3]);
        assert_eq!(oracle_offsets(&e, 6, Orientation::Csc), vec![0, 0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn filter_extremes() {
        let table = vec![("A".to_string(), vec![true, false, true])];
        let a = LabelExpr::Atom("A".into());
        let taut = LabelExpr::Or(Box::new(a.clone()), Box::new(LabelExpr::Not(Box::new(a.clone()))));
        let contra = LabelExpr::And(Box::new(a.clone()), Box::new(LabelExpr::Not(Box::new(a))));
        assert_eq!(oracle_filter(&table, &taut).unwrap(), vec![0, 1, 2]);
        assert!(oracle_filter(&table, &contra).unwrap().is_empty());
        assert!(oracle_filter(&table, &LabelExpr::Atom("B".into())).is_none());
    }

    #[test]
    fn delta_roundtrips() {
        assert!(oracle_delta_roundtrip(&[1, 2, 3]));
        assert!(oracle_delta_roundtrip(&[5, -3, 9, i64::MIN, i64::MAX]));
        assert!(oracle_delta_roundtrip(&[]));
        assert_eq!(oracle_runs(&[true, true, false]), vec![0, 2, 3]);
    }
}
