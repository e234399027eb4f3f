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

use std::collections::BTreeSet;

use gar_core::colstore::{bitpack, ColumnValues};
use gar_core::oracle::{oracle_neighbors, oracle_offsets};
use gar_core::topology::{gaps_to_bitmap_fast, gaps_to_bitmap_scalar, GapRun, MiniblockSpan};
use gar_core::{build_topology, generate_synthetic, Orientation, SyntheticParams};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = (u64, u64, Vec<(u64, u64)>)> {
    (1u64..60, 1u64..60).prop_flat_map(|(ns, nd)| {
        let pairs = prop::collection::btree_set((0..ns, 0..nd), 0..300);
        (
            Just(ns),
            Just(nd),
            pairs.prop_map(|s: BTreeSet<(u64, u64)>| s.into_iter().collect()),
        )
    })
}

fn page_rows() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![4usize, 16, 64, 1024])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn every_vertex_matches_the_oracle((ns, nd, mut edges) in graph(), pr in page_rows(), seed in any::<u64>()) {
        // shuffle deterministically so input order differs from sorted order
        edges.sort_by_key(|&(s, d)| (s ^ seed).wrapping_mul(31).wrapping_add(d ^ (seed >> 7)));
        for o in [Orientation::Csr, Orientation::Csc] {
            let (keys, values) = if o == Orientation::Csr { (ns, nd) } else { (nd, ns) };
            let (topo, _) = build_topology(&edges, &[], o, ns, nd, pr).unwrap();
            let offsets: Vec<u64> = topo.offset_column().read_all().unwrap().as_int64().unwrap().iter().map(|&x| x as u64).collect();
            prop_assert_eq!(offsets, oracle_offsets(&edges, keys, o));
            prop_assert_eq!(topo.value_count(), values);
            for v in 0..keys {
                let want = oracle_neighbors(&edges, v, o);
                prop_assert_eq!(&topo.neighbor_ids(v).unwrap(), &want);
                let pac = topo.neighbor_pac(v, pr).unwrap();
                prop_assert_eq!(pac.ids().collect::<Vec<_>>(), want.clone());
                prop_assert_eq!(&topo.neighbor_pac_scalar(v, pr).unwrap(), &pac);
            }
        }
    }

    #[test]
    fn reversed_csr_equals_csc((ns, nd, edges) in graph(), pr in page_rows()) {
        let reversed: Vec<(u64, u64)> = edges.iter().map(|&(s, d)| (d, s)).collect();
        let (csc, _) = build_topology(&edges, &[], Orientation::Csc, ns, nd, pr).unwrap();
        let (rev, _) = build_topology(&reversed, &[], Orientation::Csr, nd, ns, pr).unwrap();
        for v in 0..nd {
            prop_assert_eq!(csc.neighbor_ids(v).unwrap(), rev.neighbor_ids(v).unwrap());
        }
    }

    #[test]
    fn fast_and_scalar_decoders_agree(
        width in prop::sample::select(vec![1u8, 2, 4]),
        min_raw in 1i64..17,
        stored in prop::collection::vec(any::<u64>(), 1..=32),
        lo in 0usize..32,
        start in 0u64..5000,
    ) {
        let spread = (1u64 << width) - 1;
        let min_delta = min_raw.min(16 - spread as i64);
        let stored: Vec<u64> = stored.iter().map(|s| s & spread).collect();
        let mut packed = Vec::new();
        bitpack::pack(&stored, width, &mut packed);
        let lo = lo.min(stored.len() - 1);
        let span = MiniblockSpan { packed: &packed, lo, hi: stored.len() };
        let fast = gaps_to_bitmap_fast(span, min_delta, width, start, 64).unwrap();
        let run = GapRun { start_id: start, raw_deltas: stored[lo..].iter().map(|&s| min_delta + s as i64).collect() };
        prop_assert_eq!(fast, gaps_to_bitmap_scalar(&run, 64).unwrap());
    }
}

#[test]
fn properties_travel_with_edges_in_both_orientations() {
    let edges = vec![(2, 0), (0, 1), (1, 2), (0, 2)];
    let weight = ColumnValues::Int64(vec![20, 1, 12, 2]);
    let props = vec![("w".to_string(), weight)];
    for o in [Orientation::Csr, Orientation::Csc] {
        let (topo, _) = build_topology(&edges, &props, o, 3, 3, 1024).unwrap();
        let src = topo.src_column().read_all().unwrap();
        let dst = topo.dst_column().read_all().unwrap();
        let w = topo.property("w").unwrap().read_all().unwrap();
        for i in 0..edges.len() {
            let (s, d) = (src.as_int64().unwrap()[i], dst.as_int64().unwrap()[i]);
            assert_eq!(w.as_int64().unwrap()[i], s * 10 + d, "{o:?} row {i}");
        }
    }
}

#[test]
fn clustered_graph_retrieval_is_cheap() {
    let g = generate_synthetic(&SyntheticParams {
        vertices: 20_000,
        edges: 200_000,
        locality: 0.9,
        seed: 3,
        ..Default::default()
    })
    .unwrap();
    let (topo, _) = build_topology(&g.edges, &[], Orientation::Csr, 20_000, 20_000, 1024).unwrap();
    let mut max_cost = 0;
    for v in (0..20_000).step_by(97) {
        topo.neighbor_pac(v, 1024).unwrap();
        max_cost = max_cost.max(topo.retrieval_page_cost());
    }
    assert!(max_cost <= 3, "max cost {max_cost}");
    assert!(topo.value_column().page_count() >= 195);
}
