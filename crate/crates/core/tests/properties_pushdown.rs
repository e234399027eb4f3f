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

use gar_core::colstore::{encode_column, Codec, ColumnFile, ColumnValues};
use gar_core::{fetch_by_pac, GarError, Pac};
use proptest::prelude::*;

fn column(values: &[i64], pr: usize) -> ColumnFile {
    ColumnFile::from_bytes(encode_column(&ColumnValues::Int64(values.to_vec()), Codec::Plain, pr).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn full_pac_equals_full_read(values in prop::collection::vec(any::<i64>(), 0..600), pr in prop::sample::select(vec![8usize, 64, 256])) {
        let col = column(&values, pr);
        let pac = Pac::from_ids(0..values.len() as u64, pr);
        let got = fetch_by_pac(&col, &pac).unwrap();
        let all = col.read_all().unwrap();
        let want: Vec<_> = (0..values.len()).map(|i| (i as u64, all.get(i).unwrap())).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn pages_touched_equal_pac_entries(
        values in prop::collection::vec(any::<i64>(), 1..2000),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 0..50),
    ) {
        let col = column(&values, 64);
        let pac = Pac::from_ids(picks.iter().map(|p| p.index(values.len()) as u64), 64);
        let got = fetch_by_pac(&col, &pac).unwrap();
        prop_assert_eq!(col.pages_read(), pac.page_count() as u64);
        prop_assert!(got.windows(2).all(|w| w[0].0 < w[1].0));
        for (id, v) in got {
            prop_assert_eq!(v, gar_core::Value::Int64(values[id as usize]));
        }
    }
}

#[test]
fn pages_zero_and_seven_of_ten() {
    let values: Vec<i64> = (0..10 * 1024).collect();
    let col = column(&values, 1024);
    let pac = Pac::from_ids([5, 7 * 1024 + 1], 1024);
    assert_eq!(fetch_by_pac(&col, &pac).unwrap().len(), 2);
    assert_eq!(col.pages_read(), 2);
}

#[test]
fn delta_columns_are_fetchable_too() {
    let values: Vec<i64> = (0..3000).map(|i| i * 3).collect();
    let col = ColumnFile::from_bytes(encode_column(&ColumnValues::Int64(values), Codec::Delta, 1024).unwrap()).unwrap();
    let got = fetch_by_pac(&col, &Pac::from_ids([2999], 1024)).unwrap();
    assert_eq!(got, vec![(2999, gar_core::Value::Int64(8997))]);
    assert!(matches!(
        fetch_by_pac(&col, &Pac::from_ids([3000], 1024)),
        Err(GarError::MemberOutOfRange { .. })
    ));
}
