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

use gar_core::colstore::{
    encode_column, write_column, Codec, ColumnFile, ColumnValues, DeltaPage, IntervalPage, PhysicalType, CRC_BYTES,
    DIRECTORY_ENTRY_BYTES, HEADER_BYTES,
};
use gar_core::oracle::{oracle_delta_roundtrip, oracle_runs};
use gar_core::GarError;
use proptest::prelude::*;

fn page_rows() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![1usize, 2, 8, 32, 64, 1024])
}

fn ints() -> impl Strategy<Value = Vec<i64>> {
    prop_oneof![
        prop::collection::vec(any::<i64>(), 0..300),
        prop::collection::vec(-50i64..50, 0..300),
        prop::collection::vec(0i64..20, 0..300).prop_map(|gaps| {
            gaps.iter()
                .scan(0i64, |acc, g| {
                    *acc += g;
                    Some(*acc)
                })
                .collect()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn int_columns_roundtrip_under_both_codecs(values in ints(), pr in page_rows()) {
        prop_assert!(oracle_delta_roundtrip(&values));
        for codec in [Codec::Plain, Codec::Delta] {
            let file = ColumnFile::from_bytes(encode_column(&ColumnValues::Int64(values.clone()), codec, pr).unwrap()).unwrap();
            prop_assert_eq!(file.total_rows(), values.len() as u64);
            prop_assert_eq!(file.read_all().unwrap(), ColumnValues::Int64(values.clone()));
        }
    }

    #[test]
    fn bool_columns_roundtrip(values in prop::collection::vec(any::<bool>(), 0..400), pr in page_rows()) {
        for codec in [Codec::Plain, Codec::RleBool] {
            let file = ColumnFile::from_bytes(encode_column(&ColumnValues::Bool(values.clone()), codec, pr).unwrap()).unwrap();
            prop_assert_eq!(file.read_all().unwrap(), ColumnValues::Bool(values.clone()));
        }
    }

    #[test]
    fn interval_pages_obey_size_law(values in prop::collection::vec(any::<bool>(), 1..500)) {
        let page = IntervalPage::encode(&values);
        let want: Vec<u32> = oracle_runs(&values).into_iter().map(|b| b as u32).collect();
        prop_assert_eq!(&page.boundaries, &want);
        let mut bytes = Vec::new();
        page.write_to(&mut bytes);
        prop_assert_eq!(bytes.len(), 3 + 2 * (want.len() - 2));
        prop_assert_eq!(IntervalPage::parse(&bytes, values.len()).unwrap().decode(), values);
    }

    #[test]
    fn delta_page_random_access(values in prop::collection::vec(any::<i64>(), 1..200), pick in any::<prop::sample::Index>()) {
        let page = DeltaPage::encode(&values);
        let row = pick.index(values.len());
        prop_assert_eq!(page.value_at(row), values[row]);
        let mut bytes = Vec::new();
        page.write_to(&mut bytes);
        prop_assert_eq!(bytes.len(), page.encoded_len());
        prop_assert_eq!(DeltaPage::parse(&bytes, values.len()).unwrap(), page);
    }

    #[test]
    fn strings_and_floats_roundtrip(
        strings in prop::collection::vec(".{0,12}", 0..100),
        floats in prop::collection::vec(any::<f64>().prop_filter("comparable", |f| !f.is_nan()), 0..100),
        pr in page_rows(),
    ) {
        let s = ColumnValues::String(strings);
        prop_assert_eq!(ColumnFile::from_bytes(encode_column(&s, Codec::Plain, pr).unwrap()).unwrap().read_all().unwrap(), s);
        let f = ColumnValues::Float64(floats);
        prop_assert_eq!(ColumnFile::from_bytes(encode_column(&f, Codec::Plain, pr).unwrap()).unwrap().read_all().unwrap(), f);
    }

    #[test]
    fn range_reads_match_slices(values in ints(), pr in page_rows(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let n = values.len() + 1;
        let (lo, hi) = { let (x, y) = (a.index(n), b.index(n)); (x.min(y), x.max(y)) };
        let file = ColumnFile::from_bytes(encode_column(&ColumnValues::Int64(values.clone()), Codec::Delta, pr).unwrap()).unwrap();
        prop_assert_eq!(file.read_rows(lo as u64, hi as u64).unwrap(), ColumnValues::Int64(values[lo..hi].to_vec()));
        prop_assert_eq!(file.pages_read() as usize, file.pages_for_range(lo as u64, hi as u64).len());
    }

    #[test]
    fn any_single_bit_flip_is_detected(values in prop::collection::vec(any::<i64>(), 1..100), pos in any::<prop::sample::Index>(), bit in 0u8..8) {
        let mut bytes = encode_column(&ColumnValues::Int64(values), Codec::Delta, 32).unwrap();
        let i = pos.index(bytes.len());
        bytes[i] ^= 1 << bit;
        prop_assert!(ColumnFile::from_bytes(bytes).is_err());
    }
}

#[test]
fn file_size_accounts_for_every_byte() {
    let values = ColumnValues::Int64((0..3000).collect());
    let file = ColumnFile::from_bytes(encode_column(&values, Codec::Plain, 1024).unwrap()).unwrap();
    let stats = file.stats();
    assert_eq!(stats.pages, 3);
    assert_eq!(stats.payload_bytes, 3000 * 8);
    assert_eq!(
        stats.file_bytes as usize,
        HEADER_BYTES + 3 * DIRECTORY_ENTRY_BYTES + 3000 * 8 + CRC_BYTES
    );
}

#[test]
fn incompatible_codecs_are_rejected() {
    let strings = ColumnValues::String(vec!["a".into()]);
    assert!(matches!(
        encode_column(&strings, Codec::Delta, 1024),
        Err(GarError::IncompatibleCodec {
            physical: PhysicalType::String,
            ..
        })
    ));
    let ints = ColumnValues::Int64(vec![1]);
    assert!(matches!(
        encode_column(&ints, Codec::RleBool, 1024),
        Err(GarError::IncompatibleCodec { .. })
    ));
    assert!(matches!(
        encode_column(&ints, Codec::Plain, 1000),
        Err(GarError::InvalidPageRows(1000))
    ));
}

#[test]
fn files_on_disk_reopen() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.gar");
    let values = ColumnValues::Bool((0..5000).map(|i| i % 700 < 300).collect());
    write_column(&path, &values, Codec::RleBool, 256).unwrap();
    let back = ColumnFile::open(&path).unwrap();
    assert_eq!(back.read_all().unwrap(), values);
    assert_eq!(back.page_rows(), Some(256));
    assert!(back.is_aligned_to(256));
    assert!(!back.is_aligned_to(512));
}
