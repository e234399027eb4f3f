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

//! Micro-benchmark suites comparing the archive encodings with simple
//! baselines: plain 64-bit edge tables with and without an offset index,
//! and plain or string-concatenated label columns.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::colstore::{encode_column, Codec, ColumnFile, ColumnValues};
use crate::error::Result;
use crate::ingest::{generate_synthetic, SyntheticGraph, SyntheticParams};
use crate::labels::{filter_complex, filter_simple, parse_label_expr, IntervalLabelColumn};
use crate::properties::fetch_by_pac;
use crate::topology::{build_topology, hardware_pext_available, EdgeTopology, Orientation};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub vertices: u64,
    pub edges_per_vertex: u64,
    pub locality: f64,
    pub labels: usize,
    pub mean_run: u64,
    pub samples: usize,
    pub page_rows: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            vertices: 100_000,
            edges_per_vertex: 10,
            locality: 0.9,
            labels: 4,
            mean_run: 256,
            samples: 1000,
            page_rows: 1024,
            seed: 42,
        }
    }
}

impl BenchConfig {
    fn params(&self) -> SyntheticParams {
        SyntheticParams {
            vertices: self.vertices,
            edges: self.vertices * self.edges_per_vertex,
            locality: self.locality,
            labels: self.labels,
            mean_run: self.mean_run,
            seed: self.seed,
            ..SyntheticParams::default()
        }
    }

    fn sample(&self, n: u64) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5eed);
        let mut ids: Vec<u64> = (0..n).collect();
        ids.shuffle(&mut rng);
        ids.truncate(self.samples.min(n as usize));
        ids
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TopologyReport {
    pub vertices: u64,
    pub edges: u64,
    pub locality: f64,
    pub page_rows: usize,
    pub plain_bytes: u64,
    pub plain_offset_bytes: u64,
    pub delta_bytes: u64,
    pub delta_offset_bytes: u64,
    /// Delta-encoded src+dst over plain 64-bit src+dst.
    pub delta_ratio: f64,
    pub delta_offset_ratio: f64,
    pub sort_ms: f64,
    pub offset_ms: f64,
    pub write_ms: f64,
    pub sampled_vertices: usize,
    pub median_retrieval_pages: u64,
    pub full_scan_pages: u64,
    pub page_cost_ratio: f64,
    pub plain_scan_us: f64,
    pub plain_offset_us: f64,
    pub delta_scalar_us: f64,
    pub delta_fast_us: f64,
    pub hardware_pext: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelsReport {
    pub vertices: u64,
    pub labels: usize,
    pub boundaries: u64,
    pub boundary_density: f64,
    pub rle_bytes: u64,
    pub plain_bool_bytes: u64,
    pub string_bytes: u64,
    pub rle_vs_plain: f64,
    pub rle_vs_string: f64,
    pub expression: String,
    pub matches: u64,
    pub evaluations: u64,
    pub simple_filter_us: f64,
    pub complex_filter_us: f64,
    pub row_scan_us: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct E2eReport {
    pub vertices: u64,
    pub edges: u64,
    pub queries: usize,
    pub neighbors_fetched: u64,
    pub pac_entries: u64,
    pub pushdown_pages: u64,
    pub scan_pages: u64,
    pub pushdown_us: f64,
    pub scan_us: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "suite", rename_all = "lowercase")]
pub enum BenchReport {
    Topology(TopologyReport),
    Labels(LabelsReport),
    E2e(E2eReport),
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn per_query_us(d: Duration, queries: usize) -> f64 {
    d.as_secs_f64() * 1e6 / queries.max(1) as f64
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn column(values: ColumnValues, codec: Codec, page_rows: usize) -> Result<ColumnFile> {
    ColumnFile::from_bytes(encode_column(&values, codec, page_rows)?)
}

fn payload(col: &ColumnFile) -> u64 {
    col.stats().payload_bytes
}

fn median(values: &mut [u64]) -> u64 {
    if values.is_empty() {
        return 0;
    }
    values.sort_unstable();
    values[values.len() / 2]
}

pub fn run_topology(cfg: &BenchConfig) -> Result<TopologyReport> {
    let graph = generate_synthetic(&cfg.params())?;
    topology_report(cfg, &graph)
}

/// Topology measurements on an already generated graph.
pub fn topology_report(cfg: &BenchConfig, graph: &SyntheticGraph) -> Result<TopologyReport> {
    let n = graph.params.vertices;
    let pr = cfg.page_rows;
    let (topo, timings) = build_topology(&graph.edges, &[], Orientation::Csr, n, n, pr)?;
    let src = topo.src_column().read_all()?;
    let dst = topo.dst_column().read_all()?;
    let plain_src = column(src, Codec::Plain, pr)?;
    let plain_dst = column(dst, Codec::Plain, pr)?;
    let plain_bytes = payload(&plain_src) + payload(&plain_dst);
    let delta_bytes = payload(topo.src_column()) + payload(topo.dst_column());
    let offset_bytes = payload(topo.offset_column());

    let sample = cfg.sample(n);
    let mut costs = Vec::with_capacity(sample.len());
    let started = Instant::now();
    for &v in &sample {
        std::hint::black_box(topo.neighbor_pac(v, pr)?);
        costs.push(topo.retrieval_page_cost());
    }
    let fast = started.elapsed();
    let started = Instant::now();
    for &v in &sample {
        std::hint::black_box(topo.neighbor_pac_scalar(v, pr)?);
    }
    let scalar = started.elapsed();
    let started = Instant::now();
    for &v in &sample {
        let bounds = topo.offset_column().read_rows(v, v + 2)?;
        let b = bounds.as_int64().expect("int64");
        std::hint::black_box(plain_dst.read_rows(b[0] as u64, b[1] as u64)?);
    }
    let plain_offset = started.elapsed();
    let scans = sample.len().min(20);
    let started = Instant::now();
    for &v in &sample[..scans] {
        let keys = plain_src.read_all()?;
        let values = plain_dst.read_all()?;
        let (k, d) = (keys.as_int64().expect("int64"), values.as_int64().expect("int64"));
        let hits: Vec<i64> = k
            .iter()
            .zip(d)
            .filter(|(&s, _)| s as u64 == v)
            .map(|(_, &x)| x)
            .collect();
        std::hint::black_box(hits);
    }
    let plain_scan = started.elapsed();

    let median_pages = median(&mut costs);
    let full_scan_pages = topo.value_column().page_count() as u64;
    Ok(TopologyReport {
        vertices: n,
        edges: topo.edge_count(),
        locality: graph.params.locality,
        page_rows: pr,
        plain_bytes,
        plain_offset_bytes: plain_bytes + offset_bytes,
        delta_bytes,
        delta_offset_bytes: delta_bytes + offset_bytes,
        delta_ratio: ratio(delta_bytes, plain_bytes),
        delta_offset_ratio: ratio(delta_bytes + offset_bytes, plain_bytes + offset_bytes),
        sort_ms: ms(timings.sort),
        offset_ms: ms(timings.offset),
        write_ms: ms(timings.write),
        sampled_vertices: sample.len(),
        median_retrieval_pages: median_pages,
        full_scan_pages,
        page_cost_ratio: ratio(full_scan_pages, median_pages.max(1)),
        plain_scan_us: per_query_us(plain_scan, scans),
        plain_offset_us: per_query_us(plain_offset, sample.len()),
        delta_scalar_us: per_query_us(scalar, sample.len()),
        delta_fast_us: per_query_us(fast, sample.len()),
        hardware_pext: hardware_pext_available(),
    })
}

pub fn run_labels(cfg: &BenchConfig) -> Result<LabelsReport> {
    let params = SyntheticParams {
        edges: 0,
        ..cfg.params()
    };
    let graph = generate_synthetic(&params)?;
    labels_report(cfg, &graph)
}

pub fn labels_report(cfg: &BenchConfig, graph: &SyntheticGraph) -> Result<LabelsReport> {
    let n = graph.params.vertices;
    let pr = cfg.page_rows;
    let mut rle_bytes = 0;
    let mut plain_bool_bytes = 0;
    let mut cols = Vec::new();
    for (label, values) in &graph.labels {
        let rle = column(ColumnValues::Bool(values.clone()), Codec::RleBool, pr)?;
        let plain = column(ColumnValues::Bool(values.clone()), Codec::Plain, pr)?;
        rle_bytes += payload(&rle);
        plain_bool_bytes += payload(&plain);
        cols.push(IntervalLabelColumn::from_column(label.clone(), &rle)?);
    }
    let concatenated: Vec<String> = (0..n as usize)
        .map(|i| {
            graph
                .labels
                .iter()
                .filter(|(_, v)| v[i])
                .map(|(l, _)| l.as_str())
                .collect::<Vec<_>>()
                .join(";")
        })
        .collect();
    let string_bytes = payload(&column(ColumnValues::String(concatenated), Codec::Plain, pr)?);
    let boundaries: u64 = cols.iter().map(|c| c.boundaries().len().saturating_sub(2) as u64).sum();

    let names: Vec<&str> = cols.iter().map(|c| c.label()).collect();
    let expression = match names.as_slice() {
        [] => String::new(),
        [a] => format!("{a}&!{a}|{a}"),
        [a, b] => format!("{a}&!{b}"),
        [a, b, c, ..] => format!("({a}&!{b})|{c}"),
    };
    let (mut matches, mut evaluations) = (0, 0);
    let (mut simple, mut complex, mut scan) = (Duration::ZERO, Duration::ZERO, Duration::ZERO);
    if let Some(first) = cols.first() {
        let started = Instant::now();
        std::hint::black_box(filter_simple(first, true));
        simple = started.elapsed();
        let expr = parse_label_expr(&expression)?;
        let started = Instant::now();
        let outcome = filter_complex(&cols, &expr)?;
        complex = started.elapsed();
        matches = outcome.set.row_count();
        evaluations = outcome.evaluations;
        let started = Instant::now();
        let mut hits = 0u64;
        let mut row = 0usize;
        while row < n as usize {
            let mut value = |l: &str| graph.labels.iter().find(|(x, _)| x == l).is_some_and(|(_, v)| v[row]);
            if expr.eval(&mut value) {
                hits += 1;
            }
            row += 1;
        }
        scan = started.elapsed();
        debug_assert_eq!(hits, matches);
    }
    Ok(LabelsReport {
        vertices: n,
        labels: cols.len(),
        boundaries,
        boundary_density: ratio(boundaries, n * cols.len() as u64),
        rle_bytes,
        plain_bool_bytes,
        string_bytes,
        rle_vs_plain: ratio(rle_bytes, plain_bool_bytes),
        rle_vs_string: ratio(rle_bytes, string_bytes),
        expression,
        matches,
        evaluations,
        simple_filter_us: per_query_us(simple, 1),
        complex_filter_us: per_query_us(complex, 1),
        row_scan_us: per_query_us(scan, 1),
    })
}

pub fn run_e2e(cfg: &BenchConfig) -> Result<E2eReport> {
    let graph = generate_synthetic(&cfg.params())?;
    e2e_report(cfg, &graph)
}

/// Friends-of-a-person lookups: neighbor PAC then property fetch, against
/// neighbor ids followed by a full property column scan.
pub fn e2e_report(cfg: &BenchConfig, graph: &SyntheticGraph) -> Result<E2eReport> {
    let n = graph.params.vertices;
    let pr = cfg.page_rows;
    let (topo, _) = build_topology(&graph.edges, &[], Orientation::Csr, n, n, pr)?;
    let names = column(ColumnValues::String(graph.names.clone()), Codec::Plain, pr)?;
    let sample = cfg.sample(n);
    let queries = sample.len().min(100);

    let mut fetched = 0u64;
    let mut pac_entries = 0u64;
    let mut pushdown_pages = 0u64;
    let started = Instant::now();
    for &v in &sample[..queries] {
        let pac = topo.neighbor_pac(v, pr)?;
        names.reset_pages_read();
        let rows = fetch_by_pac(&names, &pac)?;
        pushdown_pages += topo.retrieval_page_cost() + names.pages_read();
        pac_entries += pac.page_count() as u64;
        fetched += rows.len() as u64;
        std::hint::black_box(rows);
    }
    let pushdown = started.elapsed();

    let mut scan_pages = 0u64;
    let started = Instant::now();
    for &v in &sample[..queries] {
        let ids = topo.neighbor_ids(v)?;
        scan_pages += topo.retrieval_page_cost();
        names.reset_pages_read();
        let all = names.read_all()?;
        scan_pages += names.pages_read();
        let rows: Vec<_> = ids.iter().map(|&id| all.get(id as usize)).collect();
        std::hint::black_box(rows);
    }
    let scan = started.elapsed();

    Ok(E2eReport {
        vertices: n,
        edges: topo.edge_count(),
        queries,
        neighbors_fetched: fetched,
        pac_entries,
        pushdown_pages,
        scan_pages,
        pushdown_us: per_query_us(pushdown, queries),
        scan_us: per_query_us(scan, queries),
    })
}

/// Field/value pairs of a report, in declaration order.
pub fn report_rows(report: &BenchReport) -> Vec<(String, String)> {
    match report {
        BenchReport::Topology(r) => serde_value(r),
        BenchReport::Labels(r) => serde_value(r),
        BenchReport::E2e(r) => serde_value(r),
    }
}

fn serde_value<T: Serialize>(r: &T) -> Vec<(String, String)> {
    let yaml = serde_yaml::to_value(r).expect("reports serialize");
    let serde_yaml::Value::Mapping(map) = yaml else {
        return Vec::new();
    };
    map.into_iter()
        .map(|(k, v)| {
            let key = k.as_str().unwrap_or_default().to_string();
            let text = match v {
                serde_yaml::Value::Number(num) if num.is_f64() => format!("{:.4}", num.as_f64().unwrap()),
                serde_yaml::Value::Number(num) => num.to_string(),
                serde_yaml::Value::Bool(b) => b.to_string(),
                serde_yaml::Value::String(s) => s,
                other => format!("{other:?}"),
            };
            (key, text)
        })
        .collect()
}

/// Topology of `graph` in both orientations, for callers that need the tables.
pub fn build_both(graph: &SyntheticGraph, page_rows: usize) -> Result<(EdgeTopology, EdgeTopology)> {
    let n = graph.params.vertices;
    let (csr, _) = build_topology(&graph.edges, &[], Orientation::Csr, n, n, page_rows)?;
    let (csc, _) = build_topology(&graph.edges, &[], Orientation::Csc, n, n, page_rows)?;
    Ok((csr, csc))
}
