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

//! Miniblock delta encoding for int64 pages.
//!
//! A page stores its first value followed by the deltas between consecutive
//! rows, grouped into miniblocks of [`MINIBLOCK_SIZE`] deltas. Each miniblock
//! subtracts its smallest delta and bit-packs the remainders at a shared
//! power-of-two width. Payload layout:
//!
//! ```text
//! first_value i64 | { min_delta i64 | bit_width u8 | packed[32 * bit_width / 8] }*
//! ```
//!
//! The miniblock count is implied by the page row count: `ceil((rows - 1) / 32)`.
//! Arithmetic wraps, so any int64 sequence roundtrips.

use super::bitpack;
use crate::error::{GarError, Result};

pub const MINIBLOCK_SIZE: usize = 32;

/// Fixed per-miniblock header: min_delta plus bit width.
pub const MINIBLOCK_HEADER_BYTES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Miniblock {
    pub min_delta: i64,
    pub bit_width: u8,
    /// Always `32 * bit_width / 8` bytes; short final miniblocks are zero-padded.
    pub packed: Vec<u8>,
}

impl Miniblock {
    /// Stored (min-subtracted) value at `index`.
    #[inline]
    pub fn stored(&self, index: usize) -> u64 {
        bitpack::unpack_one(&self.packed, self.bit_width, index)
    }

    /// Raw delta at `index`: `min_delta + stored`.
    #[inline]
    pub fn raw_delta(&self, index: usize) -> i64 {
        self.min_delta.wrapping_add(self.stored(index) as i64)
    }

    fn encoded_len(&self) -> usize {
        MINIBLOCK_HEADER_BYTES + self.packed.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaPage {
    pub first_value: i64,
    pub row_count: usize,
    pub miniblocks: Vec<Miniblock>,
}

impl DeltaPage {
    pub fn encode(values: &[i64]) -> DeltaPage {
        assert!(!values.is_empty(), "a delta page holds at least one row");
        let deltas: Vec<i64> = values.windows(2).map(|w| w[1].wrapping_sub(w[0])).collect();
        let miniblocks = deltas
            .chunks(MINIBLOCK_SIZE)
            .map(|chunk| {
                let min_delta = *chunk.iter().min().expect("chunks are non-empty");
                let mut stored = [0u64; MINIBLOCK_SIZE];
                for (slot, &d) in stored.iter_mut().zip(chunk) {
                    *slot = d.wrapping_sub(min_delta) as u64;
                }
                let bit_width = bitpack::width_for(stored.iter().copied().max().unwrap_or(0));
                let mut packed = Vec::with_capacity(MINIBLOCK_SIZE * 8);
                bitpack::pack(&stored, bit_width, &mut packed);
                Miniblock {
                    min_delta,
                    bit_width,
                    packed,
                }
            })
            .collect();
        DeltaPage {
            first_value: values[0],
            row_count: values.len(),
            miniblocks,
        }
    }

    pub fn miniblock_count(rows: usize) -> usize {
        rows.saturating_sub(1).div_ceil(MINIBLOCK_SIZE)
    }

    pub fn encoded_len(&self) -> usize {
        8 + self.miniblocks.iter().map(Miniblock::encoded_len).sum::<usize>()
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.first_value.to_le_bytes());
        for mb in &self.miniblocks {
            out.extend_from_slice(&mb.min_delta.to_le_bytes());
            out.push(mb.bit_width);
            out.extend_from_slice(&mb.packed);
        }
    }

    pub fn parse(payload: &[u8], rows: usize) -> Result<DeltaPage> {
        if rows == 0 {
            return Err(GarError::Corrupt("delta page with zero rows".into()));
        }
        let mut cursor = Reader { buf: payload, pos: 0 };
        let first_value = cursor.i64()?;
        let count = Self::miniblock_count(rows);
        let mut miniblocks = Vec::with_capacity(count);
        for i in 0..count {
            let min_delta = cursor.i64()?;
            let bit_width = cursor.u8()?;
            if !bitpack::is_valid_width(bit_width) {
                return Err(GarError::Corrupt(format!(
                    "miniblock {i} has invalid bit width {bit_width}"
                )));
            }
            let packed = cursor.take(MINIBLOCK_SIZE * bit_width as usize / 8)?.to_vec();
            miniblocks.push(Miniblock {
                min_delta,
                bit_width,
                packed,
            });
        }
        if cursor.pos != payload.len() {
            return Err(GarError::Corrupt(format!(
                "delta page has {} trailing bytes",
                payload.len() - cursor.pos
            )));
        }
        Ok(DeltaPage {
            first_value,
            row_count: rows,
            miniblocks,
        })
    }

    /// Raw delta leading from row `j` to row `j + 1`.
    #[inline]
    pub fn raw_delta(&self, j: usize) -> i64 {
        self.miniblocks[j / MINIBLOCK_SIZE].raw_delta(j % MINIBLOCK_SIZE)
    }

    /// Reference prefix-sum decode of the first `upto` rows.
    pub fn decode_scalar(&self, upto: usize) -> Result<Vec<i64>> {
        if upto > self.row_count {
            return Err(GarError::RangeOutOfBounds {
                start: 0,
                end: upto as u64,
                total: self.row_count as u64,
            });
        }
        self.check_structure()?;
        let mut out = Vec::with_capacity(upto);
        if upto == 0 {
            return Ok(out);
        }
        let mut current = self.first_value;
        out.push(current);
        for j in 0..upto - 1 {
            current = current.wrapping_add(self.raw_delta(j));
            out.push(current);
        }
        Ok(out)
    }

    /// Value at `row`, decoded by skipping forward from the page start.
    pub fn value_at(&self, row: usize) -> i64 {
        (0..row).fold(self.first_value, |acc, j| acc.wrapping_add(self.raw_delta(j)))
    }

    pub(crate) fn check_structure(&self) -> Result<()> {
        if self.miniblocks.len() != Self::miniblock_count(self.row_count) {
            return Err(GarError::Corrupt(format!(
                "{} miniblocks for {} rows",
                self.miniblocks.len(),
                self.row_count
            )));
        }
        for (i, mb) in self.miniblocks.iter().enumerate() {
            if !bitpack::is_valid_width(mb.bit_width) || mb.packed.len() != MINIBLOCK_SIZE * mb.bit_width as usize / 8 {
                return Err(GarError::Corrupt(format!(
                    "miniblock {i}: width {} with {} packed bytes",
                    mb.bit_width,
                    mb.packed.len()
                )));
            }
        }
        Ok(())
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| GarError::Corrupt("delta page truncated".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
