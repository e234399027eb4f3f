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

//! Label filtering over interval-encoded label columns.
//!
//! Each label of a vertex type is a boolean column stored as run boundaries.
//! A single-label test only reads interval parities. Expressions over
//! several labels merge the boundary lists, since no input boundary falls
//! strictly inside a merged interval and so one evaluation per interval
//! decides every vertex in it.

pub mod expr;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

pub use expr::{parse_label_expr, LabelExpr};

use crate::colstore::{Codec, ColumnFile, PhysicalType};
use crate::error::{GarError, Result};
use crate::pac::Pac;

/// One label over all `n` vertices of a type, as a logical boundary list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalLabelColumn {
    label: String,
    n: u64,
    first_value: bool,
    boundaries: Vec<u64>,
}

impl IntervalLabelColumn {
    /// Checks `P[0] = 0`, `P[last] = n` and strict increase. For `n = 0`
    /// the list is `[0]`.
    pub fn new(label: impl Into<String>, first_value: bool, boundaries: Vec<u64>) -> Result<Self> {
        let bad = |m: &str| GarError::Corrupt(format!("boundary list {m}"));
        if boundaries.first() != Some(&0) {
            return Err(bad("must start at 0"));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("must be strictly increasing"));
        }
        let n = *boundaries.last().unwrap();
        Ok(IntervalLabelColumn {
            label: label.into(),
            n,
            first_value: first_value && n > 0,
            boundaries,
        })
    }

    pub fn from_bools(label: impl Into<String>, values: &[bool]) -> Self {
        let mut boundaries = vec![0u64];
        for (i, w) in values.windows(2).enumerate() {
            if w[0] != w[1] {
                boundaries.push(i as u64 + 1);
            }
        }
        if !values.is_empty() {
            boundaries.push(values.len() as u64);
        }
        IntervalLabelColumn {
            label: label.into(),
            n: values.len() as u64,
            first_value: values.first().copied().unwrap_or(false),
            boundaries,
        }
    }

    /// Concatenates the page-local boundary lists of an RLE_BOOL column,
    /// dropping page edges where the value carries over.
    pub fn from_column(label: impl Into<String>, column: &ColumnFile) -> Result<Self> {
        if column.physical_type() != PhysicalType::Bool {
            return Err(GarError::TypeMismatch {
                expected: PhysicalType::Bool,
                found: column.physical_type(),
            });
        }
        if column.codec() != Codec::RleBool {
            return Err(GarError::Corrupt("label column is not interval encoded".into()));
        }
        let mut boundaries = vec![0u64];
        let mut first_value = false;
        let mut last_value = None;
        for page in 0..column.page_count() {
            let base = column.page_first_row(page);
            let ip = column.interval_page(page)?;
            let count = ip.interval_count();
            for i in 0..count {
                let value = ip.interval_value(i);
                match last_value {
                    None => first_value = value,
                    Some(prev) if prev != value => boundaries.push(base + ip.boundaries[i] as u64),
                    Some(_) => {}
                }
                last_value = Some(value);
            }
        }
        if column.total_rows() > 0 {
            boundaries.push(column.total_rows());
        }
        Ok(IntervalLabelColumn {
            label: label.into(),
            n: column.total_rows(),
            first_value,
            boundaries,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vertex_count(&self) -> u64 {
        self.n
    }

    pub fn first_value(&self) -> bool {
        self.first_value
    }

    pub fn boundaries(&self) -> &[u64] {
        &self.boundaries
    }

    pub fn interval_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn interval_value(&self, i: usize) -> bool {
        self.first_value ^ (i % 2 == 1)
    }

    /// Label value of `row`, by binary search over the boundaries.
    pub fn value_at(&self, row: u64) -> Option<bool> {
        if row >= self.n {
            return None;
        }
        let i = self.boundaries.partition_point(|&b| b <= row) - 1;
        Some(self.interval_value(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.n as usize);
        for (i, w) in self.boundaries.windows(2).enumerate() {
            out.extend(std::iter::repeat_n(self.interval_value(i), (w[1] - w[0]) as usize));
        }
        out
    }
}

/// Sorted, disjoint, coalesced half-open row intervals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntervalSet {
    intervals: Vec<(u64, u64)>,
}

impl IntervalSet {
    pub fn new() -> Self {
        IntervalSet::default()
    }

    /// Appends `[start, end)`, which must not begin before the last interval ends.
    pub fn push(&mut self, start: u64, end: u64) {
        if start >= end {
            return;
        }
        match self.intervals.last_mut() {
            Some(last) if last.1 == start => last.1 = end,
            Some(last) => {
                assert!(last.1 < start, "intervals must be appended in order");
                self.intervals.push((start, end));
            }
            None => self.intervals.push((start, end)),
        }
    }

    pub fn from_ids(ids: impl IntoIterator<Item = u64>) -> Self {
        let mut set = IntervalSet::new();
        for id in ids {
            set.push(id, id + 1);
        }
        set
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of rows covered.
    pub fn row_count(&self) -> u64 {
        self.intervals.iter().map(|(s, e)| e - s).sum()
    }

    pub fn contains(&self, row: u64) -> bool {
        let i = self.intervals.partition_point(|&(s, _)| s <= row);
        i > 0 && row < self.intervals[i - 1].1
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.intervals.iter().flat_map(|&(s, e)| s..e)
    }
}

/// Result of [`filter_complex`] with the number of expression evaluations it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutcome {
    pub set: IntervalSet,
    pub evaluations: u64,
}

/// Intervals whose label value equals `exists`.
pub fn filter_simple(col: &IntervalLabelColumn, exists: bool) -> IntervalSet {
    let mut set = IntervalSet::new();
    let start = usize::from(col.first_value != exists);
    for i in (start..col.interval_count()).step_by(2) {
        set.push(col.boundaries[i], col.boundaries[i + 1]);
    }
    set
}

/// Evaluates `expr` over the columns it names, once per merged interval.
pub fn filter_complex(cols: &[IntervalLabelColumn], expr: &LabelExpr) -> Result<FilterOutcome> {
    let mut slot: HashMap<&str, usize> = HashMap::new();
    let mut used: Vec<&IntervalLabelColumn> = Vec::new();
    for atom in expr.atoms() {
        let col = cols
            .iter()
            .find(|c| c.label == atom)
            .ok_or_else(|| GarError::UnknownLabel(atom.to_string()))?;
        slot.insert(atom, used.len());
        used.push(col);
    }
    let n = match used.first() {
        Some(c) => c.n,
        None => cols.first().map_or(0, |c| c.n),
    };
    if let Some(c) = used.iter().find(|c| c.n != n) {
        return Err(GarError::VertexCountMismatch {
            expected: n,
            found: c.n,
        });
    }

    let mut set = IntervalSet::new();
    let mut evaluations = 0u64;
    let mut cursor = vec![0usize; used.len()];
    let mut values: Vec<bool> = used.iter().map(|c| c.first_value).collect();
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> = used
        .iter()
        .enumerate()
        .filter(|(_, c)| c.boundaries.len() > 1)
        .map(|(i, c)| Reverse((c.boundaries[1], i)))
        .collect();
    let mut current = 0u64;
    while current < n {
        let next = heap.peek().map_or(n, |Reverse((b, _))| *b);
        evaluations += 1;
        if expr.eval(&mut |atom| values[slot[atom]]) {
            set.push(current, next);
        }
        while let Some(&Reverse((b, i))) = heap.peek() {
            if b != next {
                break;
            }
            heap.pop();
            cursor[i] += 1;
            values[i] = !values[i];
            if let Some(&after) = used[i].boundaries.get(cursor[i] + 1) {
                heap.push(Reverse((after, i)));
            }
        }
        current = next;
    }
    Ok(FilterOutcome { set, evaluations })
}

/// Converts row intervals of an `n`-row vertex table into a PAC.
pub fn intervals_to_pac(set: &IntervalSet, page_rows: usize, n: u64) -> Result<Pac> {
    let mut pac = Pac::new(page_rows);
    for &(start, end) in set.intervals() {
        if end > n {
            return Err(GarError::IntervalOutOfRange { start, end, n });
        }
        pac.set_range(start, end);
    }
    Ok(pac)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colstore::{encode_column, ColumnValues};

    fn col(label: &str, first: bool, p: &[u64]) -> IntervalLabelColumn {
        IntervalLabelColumn::new(label, first, p.to_vec()).unwrap()
    }

    fn ivs(set: &IntervalSet) -> Vec<(u64, u64)> {
        set.intervals().to_vec()
    }

    #[test]
    fn simple_filter_reads_parities() {
        let c = col("A", true, &[0, 3, 7, 10]);
        assert_eq!(ivs(&filter_simple(&c, true)), vec![(0, 3), (7, 10)]);
        assert_eq!(ivs(&filter_simple(&c, false)), vec![(3, 7)]);
        let all = col("A", true, &[0, 10]);
        assert!(filter_simple(&all, false).is_empty());
    }

    #[test]
    fn two_list_merge() {
        let cols = [col("A", false, &[0, 4, 8, 12]), col("E", true, &[0, 6, 12])];
        let out = filter_complex(&cols, &parse_label_expr("A&E").unwrap()).unwrap();
        assert_eq!(ivs(&out.set), vec![(4, 6)]);
        assert_eq!(out.evaluations, 4);
    }

    #[test]
    fn single_atom_matches_simple_filter() {
        let cols = [col("A", true, &[0, 3, 7, 10])];
        let out = filter_complex(&cols, &LabelExpr::atom("A")).unwrap();
        assert_eq!(out.set, filter_simple(&cols[0], true));
        assert_eq!(out.evaluations, 3);
        let taut = filter_complex(&cols, &parse_label_expr("A|!A").unwrap()).unwrap();
        assert_eq!(ivs(&taut.set), vec![(0, 10)]);
    }

    #[test]
    fn unused_columns_are_not_merged() {
        let cols = [
            col("A", true, &[0, 5, 10]),
            col("B", false, &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]),
        ];
        let out = filter_complex(&cols, &LabelExpr::atom("A")).unwrap();
        assert_eq!(out.evaluations, 2);
    }

    #[test]
    fn complex_errors() {
        let cols = [col("A", true, &[0, 10]), col("B", true, &[0, 9])];
        assert!(matches!(
            filter_complex(&cols, &LabelExpr::atom("Z")),
            Err(GarError::UnknownLabel(l)) if l == "Z"
        ));
        assert!(matches!(
            filter_complex(&cols, &parse_label_expr("A&B").unwrap()),
            Err(GarError::VertexCountMismatch { .. })
        ));
    }

    #[test]
    fn empty_vertex_type() {
        let c = IntervalLabelColumn::from_bools("A", &[]);
        assert_eq!(c.boundaries(), &[0]);
        assert!(filter_simple(&c, true).is_empty());
        let out = filter_complex(std::slice::from_ref(&c), &parse_label_expr("!A").unwrap()).unwrap();
        assert!(out.set.is_empty());
        assert_eq!(out.evaluations, 0);
    }

    #[test]
    fn page_edges_coalesce_when_reading_columns() {
        let values: Vec<bool> = (0..40).map(|i| (10..30).contains(&i)).collect();
        let bytes = encode_column(&ColumnValues::Bool(values.clone()), Codec::RleBool, 8).unwrap();
        let file = ColumnFile::from_bytes(bytes).unwrap();
        let c = IntervalLabelColumn::from_column("A", &file).unwrap();
        assert_eq!(c.boundaries(), &[0, 10, 30, 40]);
        assert!(!c.first_value());
        assert_eq!(c, IntervalLabelColumn::from_bools("A", &values));
        assert_eq!(c.to_bools(), values);
    }

    #[test]
    fn pac_conversion() {
        let mut s = IntervalSet::new();
        s.push(0, 3);
        let pac = intervals_to_pac(&s, 1024, 10).unwrap();
        assert_eq!(pac.ids().collect::<Vec<_>>(), vec![0, 1, 2]);
        let edge = IntervalSet::from_ids([1023, 1024]);
        let pac = intervals_to_pac(&edge, 1024, 2000).unwrap();
        assert_eq!(pac.page_count(), 2);
        assert!(intervals_to_pac(&IntervalSet::new(), 1024, 0).unwrap().is_empty());
        assert!(matches!(
            intervals_to_pac(&s, 1024, 2),
            Err(GarError::IntervalOutOfRange { .. })
        ));
    }

    #[test]
    fn interval_set_coalesces() {
        let s = IntervalSet::from_ids([1, 2, 3, 7]);
        assert_eq!(ivs(&s), vec![(1, 4), (7, 8)]);
        assert!(s.contains(3) && !s.contains(4) && s.contains(7));
        assert_eq!(s.row_count(), 4);
    }
}
