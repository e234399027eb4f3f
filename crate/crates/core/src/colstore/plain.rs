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

//! Plain page payloads: fixed 8-byte little-endian numbers, bit-packed
//! booleans, and `(u32 length, bytes)` string records.

use super::{ColumnValues, PhysicalType};
use crate::error::{GarError, Result};

pub fn encode_page(values: &ColumnValues, out: &mut Vec<u8>) {
    match values {
        ColumnValues::Int64(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
        ColumnValues::Float64(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
        ColumnValues::String(v) => {
            for s in v {
                out.extend_from_slice(&(s.len() as u32).to_le_bytes());
                out.extend_from_slice(s.as_bytes());
            }
        }
        ColumnValues::Bool(v) => {
            let start = out.len();
            out.resize(start + v.len().div_ceil(8), 0);
            for (i, &b) in v.iter().enumerate() {
                out[start + i / 8] |= (b as u8) << (i % 8);
            }
        }
    }
}

pub fn decode_page(payload: &[u8], rows: usize, physical: PhysicalType) -> Result<ColumnValues> {
    let expect_len = |len: usize| {
        if payload.len() == len {
            Ok(())
        } else {
            Err(GarError::Corrupt(format!(
                "plain {physical:?} page of {rows} rows has {} bytes, expected {len}",
                payload.len()
            )))
        }
    };
    Ok(match physical {
        PhysicalType::Int64 => {
            expect_len(rows * 8)?;
            ColumnValues::Int64(
                payload
                    .chunks_exact(8)
                    .map(|c| i64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            )
        }
        PhysicalType::Float64 => {
            expect_len(rows * 8)?;
            ColumnValues::Float64(
                payload
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            )
        }
        PhysicalType::Bool => {
            expect_len(rows.div_ceil(8))?;
            ColumnValues::Bool((0..rows).map(|i| payload[i / 8] >> (i % 8) & 1 == 1).collect())
        }
        PhysicalType::String => {
            let mut out = Vec::with_capacity(rows);
            let mut pos = 0usize;
            for _ in 0..rows {
                let len_bytes = payload
                    .get(pos..pos + 4)
                    .ok_or_else(|| GarError::Corrupt("string page truncated".into()))?;
                let len = u32::from_le_bytes(len_bytes.try_into().unwrap()) as usize;
                pos += 4;
                let bytes = payload
                    .get(pos..pos + len)
                    .ok_or_else(|| GarError::Corrupt("string page truncated".into()))?;
                let s = std::str::from_utf8(bytes).map_err(|e| GarError::Corrupt(format!("string page: {e}")))?;
                out.push(s.to_owned());
                pos += len;
            }
            expect_len(pos)?;
            ColumnValues::String(out)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bools_pack_eight_per_byte() {
        let values = ColumnValues::Bool(vec![true, false, true, true, false, false, false, false, true]);
        let mut out = Vec::new();
        encode_page(&values, &mut out);
        assert_eq!(out, vec![0b0000_1101, 0b1]);
        assert_eq!(decode_page(&out, 9, PhysicalType::Bool).unwrap(), values);
    }

    #[test]
    fn strings_roundtrip() {
        let values = ColumnValues::String(vec!["".into(), "flu".into(), "héllo".into()]);
        let mut out = Vec::new();
        encode_page(&values, &mut out);
        assert_eq!(decode_page(&out, 3, PhysicalType::String).unwrap(), values);
        assert!(decode_page(&out[..out.len() - 1], 3, PhysicalType::String).is_err());
    }
}
