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

//! Sorted edge tables with an offset index.
//!
//! An [`EdgeTopology`] holds one orientation of an edge type: edges sorted by
//! `(key, value)` vertex, where the key is the source for CSR and the
//! destination for CSC, plus an offset column whose entry `v` is the first
//! edge row keyed by `v`. The `src` and `dst` columns are delta encoded; the
//! offsets are plain.

pub mod decode;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

pub use decode::{
    fast_path_applicable, gaps_to_bitmap_fast, gaps_to_bitmap_scalar, hardware_pext_available, pext, pext_software,
    GapRun, MiniblockSpan,
};

use crate::colstore::{encode_column, Codec, ColumnFile, ColumnValues, PhysicalType, MINIBLOCK_SIZE};
use crate::error::{GarError, Result};
use crate::pac::Pac;
pub use crate::schema::Orientation;

/// Wall time spent in each stage of [`build_topology`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildTimings {
    pub sort: Duration,
    pub offset: Duration,
    pub write: Duration,
}

impl std::ops::AddAssign for BuildTimings {
    fn add_assign(&mut self, rhs: Self) {
        self.sort += rhs.sort;
        self.offset += rhs.offset;
        self.write += rhs.write;
    }
}

#[derive(Debug)]
pub struct EdgeTopology {
    orientation: Orientation,
    key_count: u64,
    value_count: u64,
    src: ColumnFile,
    dst: ColumnFile,
    offset: ColumnFile,
    properties: BTreeMap<String, ColumnFile>,
    last_cost: AtomicU64,
}

/// Sorts `edges` for `orientation`, builds the offset index and encodes all
/// columns in memory. Edge property rows follow their edges through the sort.
pub fn build_topology(
    edges: &[(u64, u64)],
    properties: &[(String, ColumnValues)],
    orientation: Orientation,
    src_count: u64,
    dst_count: u64,
    page_rows: usize,
) -> Result<(EdgeTopology, BuildTimings)> {
    for &(src, dst) in edges {
        if src >= src_count {
            return Err(GarError::EndpointOutOfRange {
                id: src,
                count: src_count,
                side: "source",
            });
        }
        if dst >= dst_count {
            return Err(GarError::EndpointOutOfRange {
                id: dst,
                count: dst_count,
                side: "destination",
            });
        }
    }
    for (name, values) in properties {
        if values.len() != edges.len() {
            return Err(GarError::PropertyLength {
                name: name.clone(),
                expected: edges.len(),
                found: values.len(),
            });
        }
    }
    let (key_count, value_count) = match orientation {
        Orientation::Csr => (src_count, dst_count),
        Orientation::Csc => (dst_count, src_count),
    };
    let mut timings = BuildTimings::default();

    let started = Instant::now();
    let mut keyed: Vec<(u64, u64, usize)> = edges
        .iter()
        .enumerate()
        .map(|(i, &(s, d))| match orientation {
            Orientation::Csr => (s, d, i),
            Orientation::Csc => (d, s, i),
        })
        .collect();
    keyed.sort_unstable();
    timings.sort = started.elapsed();
    if let Some(w) = keyed.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
        let (src, dst) = edges[w[0].2];
        return Err(GarError::DuplicateEdge { src, dst });
    }

    let started = Instant::now();
    let mut offsets = vec![0i64; key_count as usize + 1];
    for &(k, _, _) in &keyed {
        offsets[k as usize + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    timings.offset = started.elapsed();

    let started = Instant::now();
    let (srcs, dsts): (Vec<i64>, Vec<i64>) = keyed
        .iter()
        .map(|&(k, v, _)| match orientation {
            Orientation::Csr => (k as i64, v as i64),
            Orientation::Csc => (v as i64, k as i64),
        })
        .unzip();
    let order: Vec<usize> = keyed.iter().map(|&(_, _, i)| i).collect();
    let src = ColumnFile::from_bytes(encode_column(&ColumnValues::Int64(srcs), Codec::Delta, page_rows)?)?;
    let dst = ColumnFile::from_bytes(encode_column(&ColumnValues::Int64(dsts), Codec::Delta, page_rows)?)?;
    let offset = ColumnFile::from_bytes(encode_column(&ColumnValues::Int64(offsets), Codec::Plain, page_rows)?)?;
    let mut props = BTreeMap::new();
    for (name, values) in properties {
        let bytes = encode_column(&values.permute(&order), Codec::Plain, page_rows)?;
        props.insert(name.clone(), ColumnFile::from_bytes(bytes)?);
    }
    timings.write = started.elapsed();

    Ok((
        EdgeTopology {
            orientation,
            key_count,
            value_count,
            src,
            dst,
            offset,
            properties: props,
            last_cost: AtomicU64::new(0),
        },
        timings,
    ))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| GarError::io(path, e))
}

impl EdgeTopology {
    /// Writes `src.gar`, `dst.gar`, `offset.gar` and `prop_<name>.gar` into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| GarError::io(dir, e))?;
        write_bytes(&dir.join("src.gar"), self.src.as_bytes())?;
        write_bytes(&dir.join("dst.gar"), self.dst.as_bytes())?;
        write_bytes(&dir.join("offset.gar"), self.offset.as_bytes())?;
        for (name, col) in &self.properties {
            write_bytes(&dir.join(format!("prop_{name}.gar")), col.as_bytes())?;
        }
        Ok(())
    }

    /// Opens a saved orientation. `value_count` is the vertex count of the
    /// non-key side, which the columns alone do not record.
    pub fn open(dir: impl AsRef<Path>, orientation: Orientation, value_count: u64) -> Result<Self> {
        let dir = dir.as_ref();
        let src = ColumnFile::open(dir.join("src.gar"))?;
        let dst = ColumnFile::open(dir.join("dst.gar"))?;
        let offset = ColumnFile::open(dir.join("offset.gar"))?;
        for (col, name) in [(&src, "src"), (&dst, "dst"), (&offset, "offset")] {
            if col.physical_type() != PhysicalType::Int64 {
                return Err(GarError::Corrupt(format!("{name} column is not int64")));
            }
        }
        if src.codec() != Codec::Delta || dst.codec() != Codec::Delta {
            return Err(GarError::Corrupt("src/dst columns must be delta encoded".into()));
        }
        if src.total_rows() != dst.total_rows() {
            return Err(GarError::Corrupt(format!(
                "src has {} rows but dst has {}",
                src.total_rows(),
                dst.total_rows()
            )));
        }
        let Some(key_count) = offset.total_rows().checked_sub(1) else {
            return Err(GarError::Corrupt("offset column is empty".into()));
        };
        let mut properties = BTreeMap::new();
        let entries = fs::read_dir(dir).map_err(|e| GarError::io(dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| GarError::io(dir, e))?;
            let file_name = entry.file_name().to_string_lossy().into_owned();
            if let Some(name) = file_name.strip_prefix("prop_").and_then(|s| s.strip_suffix(".gar")) {
                properties.insert(name.to_string(), ColumnFile::open(entry.path())?);
            }
        }
        let topo = EdgeTopology {
            orientation,
            key_count,
            value_count,
            src,
            dst,
            offset,
            properties,
            last_cost: AtomicU64::new(0),
        };
        let last = topo.offset.read_rows(key_count, key_count + 1)?;
        if last.as_int64() != Some(&[topo.edge_count() as i64][..]) {
            return Err(GarError::Corrupt("last offset does not equal the edge count".into()));
        }
        topo.reset_counters();
        Ok(topo)
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn key_count(&self) -> u64 {
        self.key_count
    }

    pub fn value_count(&self) -> u64 {
        self.value_count
    }

    pub fn edge_count(&self) -> u64 {
        self.src.total_rows()
    }

    pub fn src_column(&self) -> &ColumnFile {
        &self.src
    }

    pub fn dst_column(&self) -> &ColumnFile {
        &self.dst
    }

    pub fn offset_column(&self) -> &ColumnFile {
        &self.offset
    }

    pub fn property(&self, name: &str) -> Option<&ColumnFile> {
        self.properties.get(name)
    }

    pub fn property_names(&self) -> impl Iterator<Item = &str> {
        self.properties.keys().map(String::as_str)
    }

    /// Column holding the neighbor side of this orientation.
    pub fn value_column(&self) -> &ColumnFile {
        match self.orientation {
            Orientation::Csr => &self.dst,
            Orientation::Csc => &self.src,
        }
    }

    /// Column holding the sorted key side.
    pub fn key_column(&self) -> &ColumnFile {
        match self.orientation {
            Orientation::Csr => &self.src,
            Orientation::Csc => &self.dst,
        }
    }

    pub fn reset_counters(&self) {
        self.src.reset_pages_read();
        self.dst.reset_pages_read();
        self.offset.reset_pages_read();
        self.properties.values().for_each(ColumnFile::reset_pages_read);
    }

    /// Edge rows `[offset[v], offset[v+1])` keyed by `v`, and the offset pages read.
    pub fn edge_range(&self, v: u64) -> Result<(u64, u64, u64)> {
        if v >= self.key_count {
            return Err(GarError::VertexOutOfRange {
                vertex: v,
                count: self.key_count,
            });
        }
        let pages = self.offset.pages_for_range(v, v + 2).len() as u64;
        let values = self.offset.read_rows(v, v + 2)?;
        let bounds = values.as_int64().expect("offset column is int64");
        let (start, end) = (bounds[0], bounds[1]);
        if start < 0 || end < start || end as u64 > self.edge_count() {
            return Err(GarError::Corrupt(format!("bad offsets {start}..{end} for vertex {v}")));
        }
        Ok((start as u64, end as u64, pages))
    }

    /// Neighbor IDs of `v`, ascending.
    pub fn neighbor_ids(&self, v: u64) -> Result<Vec<u64>> {
        let (start, end, offset_pages) = self.edge_range(v)?;
        let col = self.value_column();
        let value_pages = col.pages_for_range(start, end).len() as u64;
        let values = col.read_rows(start, end)?;
        self.last_cost.store(offset_pages + value_pages, Ordering::Relaxed);
        values
            .as_int64()
            .expect("value column is int64")
            .iter()
            .map(|&id| self.check_id(id))
            .collect()
    }

    /// Neighbors of `v` as page-aligned bitmaps over the target vertex table.
    pub fn neighbor_pac(&self, v: u64, target_page_rows: usize) -> Result<Pac> {
        self.retrieve(v, target_page_rows, true)
    }

    /// Same as [`neighbor_pac`](Self::neighbor_pac) but always decodes
    /// through the prefix-sum path.
    pub fn neighbor_pac_scalar(&self, v: u64, target_page_rows: usize) -> Result<Pac> {
        self.retrieve(v, target_page_rows, false)
    }

    /// Pages read by the most recent neighbor retrieval on this topology.
    pub fn retrieval_page_cost(&self) -> u64 {
        self.last_cost.load(Ordering::Relaxed)
    }

    /// Baseline without the offset index: scans the whole key and value
    /// columns. Returns the neighbors and the pages read.
    pub fn scan_neighbors(&self, v: u64) -> Result<(Vec<u64>, u64)> {
        let keys = self.key_column().read_all()?;
        let values = self.value_column().read_all()?;
        let pages = (self.key_column().page_count() + self.value_column().page_count()) as u64;
        let keys = keys.as_int64().expect("int64");
        let values = values.as_int64().expect("int64");
        let ids = keys
            .iter()
            .zip(values)
            .filter(|(&k, _)| k as u64 == v)
            .map(|(_, &val)| val as u64)
            .collect();
        Ok((ids, pages))
    }

    fn check_id(&self, id: i64) -> Result<u64> {
        if id >= 0 && (id as u64) < self.value_count {
            Ok(id as u64)
        } else {
            Err(GarError::Corrupt(format!(
                "neighbor id {id} outside 0..{}",
                self.value_count
            )))
        }
    }

    fn retrieve(&self, v: u64, target_page_rows: usize, fast: bool) -> Result<Pac> {
        let (start, end, offset_pages) = self.edge_range(v)?;
        let col = self.value_column();
        let pages = col.pages_for_range(start, end);
        let mut pac = Pac::new(target_page_rows);
        let mut touched = offset_pages;
        for page in pages {
            touched += 1;
            let first = col.page_first_row(page);
            let dp = col.delta_page(page)?;
            let a = (start.max(first) - first) as usize;
            let b = (end.min(first + dp.row_count as u64) - first) as usize;

            let mut current = self.check_id(dp.value_at(a))?;
            pac.insert(current);
            // delta j leads from row j to row j + 1
            let mut j = a;
            while j + 1 < b {
                let mb_index = j / MINIBLOCK_SIZE;
                let lo = j % MINIBLOCK_SIZE;
                let hi = (b - 1 - mb_index * MINIBLOCK_SIZE).min(MINIBLOCK_SIZE);
                let mb = &dp.miniblocks[mb_index];
                if fast && fast_path_applicable(mb.min_delta, mb.bit_width) {
                    let span = MiniblockSpan {
                        packed: &mb.packed,
                        lo,
                        hi,
                    };
                    current = decode::append_span_fast(&mut pac, span, mb.min_delta, mb.bit_width, current);
                } else {
                    for k in lo..hi {
                        let d = mb.raw_delta(k);
                        if d < 1 {
                            return Err(GarError::Corrupt(format!(
                                "neighbor list of vertex {v} is not strictly increasing"
                            )));
                        }
                        current = current.wrapping_add(d as u64);
                        pac.insert(current);
                    }
                }
                j = mb_index * MINIBLOCK_SIZE + hi;
            }
            if current >= self.value_count {
                return Err(GarError::Corrupt(format!(
                    "neighbor id {current} outside 0..{}",
                    self.value_count
                )));
            }
        }
        self.last_cost.store(touched, Ordering::Relaxed);
        Ok(pac)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(orientation: Orientation) -> EdgeTopology {
        build_topology(&[(0, 5), (0, 1), (2, 3)], &[], orientation, 3, 6, 1024)
            .unwrap()
            .0
    }

    fn ints(col: &ColumnFile) -> Vec<i64> {
        col.read_all().unwrap().as_int64().unwrap().to_vec()
    }

    #[test]
    fn csr_sorts_by_source_and_indexes_offsets() {
        let t = toy(Orientation::Csr);
        assert_eq!(ints(t.src_column()), vec![0, 0, 2]);
        assert_eq!(ints(t.dst_column()), vec![1, 5, 3]);
        assert_eq!(ints(t.offset_column()), vec![0, 2, 2, 3]);
    }

    #[test]
    fn csc_sorts_by_destination() {
        let t = toy(Orientation::Csc);
        assert_eq!(ints(t.src_column()), vec![0, 2, 0]);
        assert_eq!(ints(t.dst_column()), vec![1, 3, 5]);
        assert_eq!(ints(t.offset_column()), vec![0, 0, 1, 1, 2, 2, 3]);
        assert_eq!(t.neighbor_ids(5).unwrap(), vec![0]);
    }

    #[test]
    fn empty_edge_set_has_flat_offsets() {
        let (t, _) = build_topology(&[], &[], Orientation::Csr, 4, 4, 1024).unwrap();
        assert_eq!(ints(t.offset_column()), vec![0; 5]);
        assert!(t.neighbor_ids(3).unwrap().is_empty());
        assert!(t.neighbor_pac(3, 1024).unwrap().is_empty());
    }

    #[test]
    fn neighbor_queries_on_toy() {
        let t = toy(Orientation::Csr);
        assert_eq!(t.neighbor_ids(0).unwrap(), vec![1, 5]);
        assert!(t.neighbor_ids(1).unwrap().is_empty());
        assert_eq!(t.neighbor_ids(2).unwrap(), vec![3]);
        let pac = t.neighbor_pac(0, 1024).unwrap();
        assert_eq!(pac.page_count(), 1);
        assert_eq!(pac.page(0).unwrap().iter_ones().collect::<Vec<_>>(), vec![1, 5]);
        assert!(matches!(
            t.neighbor_ids(3),
            Err(GarError::VertexOutOfRange { vertex: 3, count: 3 })
        ));
    }

    #[test]
    fn isolated_vertex_costs_offset_pages_only() {
        let t = toy(Orientation::Csr);
        assert!(t.neighbor_pac(1, 1024).unwrap().is_empty());
        assert_eq!(t.retrieval_page_cost(), 1);
        t.neighbor_pac(0, 1024).unwrap();
        assert_eq!(t.retrieval_page_cost(), 2);
    }

    #[test]
    fn duplicates_and_out_of_range_rejected() {
        assert!(matches!(
            build_topology(&[(0, 1), (1, 0), (0, 1)], &[], Orientation::Csr, 2, 2, 1024),
            Err(GarError::DuplicateEdge { src: 0, dst: 1 })
        ));
        assert!(matches!(
            build_topology(&[(0, 2)], &[], Orientation::Csc, 2, 2, 1024),
            Err(GarError::EndpointOutOfRange { id: 2, .. })
        ));
    }

    #[test]
    fn properties_follow_the_sort() {
        let weights = ColumnValues::Int64(vec![50, 10, 23]);
        let (t, _) = build_topology(
            &[(0, 5), (0, 1), (2, 3)],
            &[("w".to_string(), weights)],
            Orientation::Csr,
            3,
            6,
            1024,
        )
        .unwrap();
        assert_eq!(ints(t.property("w").unwrap()), vec![10, 50, 23]);
    }

    #[test]
    fn save_and_open_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let t = toy(Orientation::Csr);
        t.save(dir.path()).unwrap();
        let back = EdgeTopology::open(dir.path(), Orientation::Csr, 6).unwrap();
        assert_eq!(back.key_count(), 3);
        assert_eq!(back.edge_count(), 3);
        assert_eq!(back.neighbor_ids(0).unwrap(), vec![1, 5]);
    }

    #[test]
    fn tail_vertex_spanning_pages() {
        // vertex 1 owns rows 10..40 of a table paged every 16 rows
        let mut edges: Vec<(u64, u64)> = (0..10).map(|d| (0, d * 3)).collect();
        edges.extend((0..30).map(|d| (1, 2 * d + 1)));
        let (t, _) = build_topology(&edges, &[], Orientation::Csr, 2, 100, 16).unwrap();
        let want: Vec<u64> = (0..30).map(|d| 2 * d + 1).collect();
        assert_eq!(t.neighbor_ids(1).unwrap(), want);
        let pac = t.neighbor_pac(1, 16).unwrap();
        assert_eq!(pac.ids().collect::<Vec<_>>(), want);
        assert_eq!(t.retrieval_page_cost(), 1 + 3);
        assert_eq!(t.neighbor_pac_scalar(1, 16).unwrap(), pac);
    }
}
