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

//! Turning delta-encoded neighbor IDs into page-aligned bitmaps.
//!
//! The scalar path adds each delta to the running ID and sets one bit at a
//! time. The fast path skips the prefix sum: for a delta `d >= 1` the one-hot
//! word `1 << (d - 1)` already has its set bit `d` positions past the
//! previous ID, so concatenating those words lowest-first yields the bitmap
//! directly. Four deltas share a 64-bit word as 16-bit lanes, the lane masks
//! `(s << 1) - 1` are built lane-parallel, and a parallel bit extract
//! compacts the word through its masks.

use crate::colstore::bitpack;
use crate::error::{GarError, Result};
use crate::pac::Pac;

const LANE_BITS: u32 = 16;
const LANES: usize = 4;
const LANE_LOW: u64 = 0x0001_0001_0001_0001;
const LANE_HIGH: u64 = 0x8000_8000_8000_8000;

/// A starting ID followed by positive gaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRun {
    pub start_id: u64,
    pub raw_deltas: Vec<i64>,
}

/// A contiguous run of stored values `[lo, hi)` inside one packed miniblock.
#[derive(Debug, Clone, Copy)]
pub struct MiniblockSpan<'a> {
    pub packed: &'a [u8],
    pub lo: usize,
    pub hi: usize,
}

/// Reference decoder: one prefix-sum step and one bit per delta.
pub fn gaps_to_bitmap_scalar(run: &GapRun, page_rows: usize) -> Result<Pac> {
    let mut pac = Pac::new(page_rows);
    let mut id = run.start_id;
    pac.insert(id);
    for (index, &delta) in run.raw_deltas.iter().enumerate() {
        if delta < 1 {
            return Err(GarError::InvalidDelta { index, delta });
        }
        id += delta as u64;
        pac.insert(id);
    }
    Ok(pac)
}

/// Whether every delta of a miniblock with this header lies in `[1, 16]`.
pub fn fast_path_applicable(min_delta: i64, bit_width: u8) -> bool {
    bit_width <= 4 && min_delta >= 1 && (min_delta - 1).saturating_add((1i64 << bit_width) - 1) < LANE_BITS as i64
}

/// Fast decoder for one miniblock span. Refuses spans whose deltas might not
/// fit a 16-bit lane; callers then fall back to [`gaps_to_bitmap_scalar`].
pub fn gaps_to_bitmap_fast(
    span: MiniblockSpan<'_>,
    min_delta: i64,
    bit_width: u8,
    start_id: u64,
    page_rows: usize,
) -> Result<Pac> {
    if !fast_path_applicable(min_delta, bit_width) {
        return Err(GarError::FastPathNotApplicable { min_delta, bit_width });
    }
    let mut pac = Pac::new(page_rows);
    pac.insert(start_id);
    append_span_fast(&mut pac, span, min_delta, bit_width, start_id);
    Ok(pac)
}

/// Sets the bits for the span's deltas after `last_id` and returns the final ID.
/// The caller guarantees `fast_path_applicable(min_delta, bit_width)`.
pub(crate) fn append_span_fast(
    pac: &mut Pac,
    span: MiniblockSpan<'_>,
    min_delta: i64,
    bit_width: u8,
    last_id: u64,
) -> u64 {
    debug_assert!(fast_path_applicable(min_delta, bit_width));
    let mut pos = last_id;
    let mut i = span.lo;
    while i < span.hi {
        let lanes = (span.hi - i).min(LANES);
        let mut word = 0u64;
        for lane in 0..lanes {
            let d = min_delta as u64 + bitpack::unpack_one(span.packed, bit_width, i + lane);
            word |= (1u64 << (d - 1)) << (lane as u32 * LANE_BITS);
        }
        let present = if lanes == LANES {
            u64::MAX
        } else {
            (1u64 << (lanes as u32 * LANE_BITS)) - 1
        };
        let mask = lane_masks(word) & present;
        let bits = pext(word, mask);
        let nbits = mask.count_ones();
        pac.set_bits(pos + 1, bits, nbits);
        pos += nbits as u64;
        i += lanes;
    }
    pos
}

/// Per 16-bit lane: `(s << 1) - 1`, with both steps confined to the lane.
#[inline]
pub(crate) fn lane_masks(word: u64) -> u64 {
    let shifted = (word << 1) & !LANE_LOW;
    lanes_sub(shifted, LANE_LOW)
}

/// Lane-wise wrapping subtraction without borrows crossing lanes.
#[inline]
fn lanes_sub(x: u64, y: u64) -> u64 {
    ((x | LANE_HIGH) - (y & !LANE_HIGH)) ^ ((x ^ !y) & LANE_HIGH)
}

/// Parallel bit extract: gathers the bits of `src` selected by `mask` into
/// the low bits of the result, preserving order.
#[inline]
pub fn pext(src: u64, mask: u64) -> u64 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("bmi2") {
            // SAFETY: the bmi2 feature was detected at runtime.
            return unsafe { pext_bmi2(src, mask) };
        }
    }
    pext_software(src, mask)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "bmi2")]
unsafe fn pext_bmi2(src: u64, mask: u64) -> u64 {
    std::arch::x86_64::_pext_u64(src, mask)
}

/// Portable parallel bit extract.
pub fn pext_software(src: u64, mut mask: u64) -> u64 {
    let mut out = 0u64;
    let mut k = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if src & low != 0 {
            out |= 1 << k;
        }
        k += 1;
        mask ^= low;
    }
    out
}

/// Whether the hardware extract instruction is used on this machine.
pub fn hardware_pext_available() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::arch::is_x86_feature_detected!("bmi2")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colstore::DeltaPage;

    fn ids(pac: &Pac) -> Vec<u64> {
        pac.ids().collect()
    }

    #[test]
    fn scalar_prefix_sums() {
        let run = GapRun {
            start_id: 0,
            raw_deltas: vec![2, 1, 4],
        };
        assert_eq!(ids(&gaps_to_bitmap_scalar(&run, 1024).unwrap()), vec![0, 2, 3, 7]);
        let lone = GapRun {
            start_id: 0,
            raw_deltas: vec![],
        };
        assert_eq!(ids(&gaps_to_bitmap_scalar(&lone, 1024).unwrap()), vec![0]);
    }

    #[test]
    fn scalar_crosses_page_boundary() {
        let run = GapRun {
            start_id: 1022,
            raw_deltas: vec![3],
        };
        let pac = gaps_to_bitmap_scalar(&run, 1024).unwrap();
        assert_eq!(pac.page(0).unwrap().iter_ones().collect::<Vec<_>>(), vec![1022]);
        assert_eq!(pac.page(1).unwrap().iter_ones().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn scalar_rejects_non_positive_delta() {
        let run = GapRun {
            start_id: 4,
            raw_deltas: vec![1, 0],
        };
        assert!(matches!(
            gaps_to_bitmap_scalar(&run, 64),
            Err(GarError::InvalidDelta { index: 1, delta: 0 })
        ));
    }

    #[test]
    fn worked_example_lanes_and_masks() {
        // deltas 2, 1, 4 -> one-hot lanes 0b10, 0b1, 0b1000
        let word = 0b10 | 0b1 << 16 | 0b1000 << 32;
        let mask = lane_masks(word) & ((1u64 << 48) - 1);
        assert_eq!(mask, 0b11 | 0b1 << 16 | 0b1111 << 32);
        // extracted bits, lowest first: 0,1 | 1 | 0,0,0,1
        assert_eq!(pext(word, mask), 0b100_0110);
        assert_eq!(mask.count_ones(), 7);
    }

    #[test]
    fn fast_matches_worked_example() {
        let page = DeltaPage::encode(&[0, 2, 3, 7]);
        let mb = &page.miniblocks[0];
        let span = MiniblockSpan {
            packed: &mb.packed,
            lo: 0,
            hi: 3,
        };
        let pac = gaps_to_bitmap_fast(span, mb.min_delta, mb.bit_width, 0, 1024).unwrap();
        assert_eq!(ids(&pac), vec![0, 2, 3, 7]);
    }

    #[test]
    fn dense_run_of_unit_gaps() {
        let span = MiniblockSpan {
            packed: &[],
            lo: 0,
            hi: 32,
        };
        let pac = gaps_to_bitmap_fast(span, 1, 0, 100, 1024).unwrap();
        assert_eq!(ids(&pac), (100..133).collect::<Vec<_>>());
    }

    #[test]
    fn sixteen_wide_gap_fills_whole_lane() {
        // min_delta 13, width 2: deltas up to 16
        let mut packed = Vec::new();
        bitpack::pack(&[3, 0, 3, 3, 1], 2, &mut packed);
        let span = MiniblockSpan {
            packed: &packed,
            lo: 0,
            hi: 5,
        };
        let pac = gaps_to_bitmap_fast(span, 13, 2, 0, 64).unwrap();
        assert_eq!(ids(&pac), vec![0, 16, 29, 45, 61, 75]);
    }

    #[test]
    fn wide_or_negative_spans_refused() {
        let span = MiniblockSpan {
            packed: &[0; 32],
            lo: 0,
            hi: 4,
        };
        assert!(matches!(
            gaps_to_bitmap_fast(span, 1, 8, 0, 1024),
            Err(GarError::FastPathNotApplicable { .. })
        ));
        assert!(gaps_to_bitmap_fast(span, 0, 1, 0, 1024).is_err());
        assert!(gaps_to_bitmap_fast(span, 2, 4, 0, 1024).is_err());
        assert!(fast_path_applicable(1, 4));
        assert!(fast_path_applicable(16, 0));
        assert!(!fast_path_applicable(17, 0));
    }

    #[test]
    fn software_pext_agrees_with_reference_definition() {
        let cases = [
            (0xFFFF_FFFF_FFFF_FFFFu64, 0x8000_0000_0000_0001u64, 0b11),
            (0b1011_0110, 0b1111_0000, 0b1011),
            (0b1010, 0b0101, 0b00),
            (0x1234_5678_9ABC_DEF0, u64::MAX, 0x1234_5678_9ABC_DEF0),
            (0x1234, 0, 0),
        ];
        for (src, mask, want) in cases {
            assert_eq!(pext_software(src, mask), want);
            assert_eq!(pext(src, mask), want);
        }
    }
}
