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

//! LSB-first bit packing of fixed-width unsigned values.
//!
//! Value `i` of width `w` occupies stream bits `[i*w, (i+1)*w)`, where stream
//! bit `k` is bit `k % 8` of byte `k / 8`. Widths are restricted to powers of
//! two, so a value narrower than a byte never straddles a byte boundary.

/// Bit widths a miniblock may use.
pub const BIT_WIDTHS: [u8; 8] = [0, 1, 2, 4, 8, 16, 32, 64];

pub fn is_valid_width(width: u8) -> bool {
    BIT_WIDTHS.contains(&width)
}

/// Smallest admissible width that can hold `max`.
pub fn width_for(max: u64) -> u8 {
    let needed = (u64::BITS - max.leading_zeros()) as u8;
    BIT_WIDTHS
        .iter()
        .copied()
        .find(|&w| w >= needed)
        .expect("64 bits always suffice")
}

/// Number of bytes holding `count` values of `width` bits.
pub fn packed_len(count: usize, width: u8) -> usize {
    (count * width as usize).div_ceil(8)
}

pub fn pack(values: &[u64], width: u8, out: &mut Vec<u8>) {
    debug_assert!(is_valid_width(width));
    let start = out.len();
    out.resize(start + packed_len(values.len(), width), 0);
    let buf = &mut out[start..];
    match width {
        0 => {}
        1 | 2 | 4 => {
            let per_byte = 8 / width as usize;
            let mask = (1u64 << width) - 1;
            for (i, &v) in values.iter().enumerate() {
                debug_assert!(v <= mask);
                let shift = (i % per_byte) * width as usize;
                buf[i / per_byte] |= ((v & mask) as u8) << shift;
            }
        }
        _ => {
            let bytes = width as usize / 8;
            for (i, &v) in values.iter().enumerate() {
                buf[i * bytes..(i + 1) * bytes].copy_from_slice(&v.to_le_bytes()[..bytes]);
            }
        }
    }
}

#[inline]
pub fn unpack_one(packed: &[u8], width: u8, index: usize) -> u64 {
    match width {
        0 => 0,
        1 | 2 | 4 => {
            let per_byte = 8 / width as usize;
            let shift = (index % per_byte) * width as usize;
            ((packed[index / per_byte] >> shift) as u64) & ((1u64 << width) - 1)
        }
        _ => {
            let bytes = width as usize / 8;
            let mut le = [0u8; 8];
            le[..bytes].copy_from_slice(&packed[index * bytes..(index + 1) * bytes]);
            u64::from_le_bytes(le)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_selection_rounds_up_to_power_of_two() {
        assert_eq!(width_for(0), 0);
        assert_eq!(width_for(1), 1);
        assert_eq!(width_for(3), 2);
        assert_eq!(width_for(4), 4);
        assert_eq!(width_for(15), 4);
        assert_eq!(width_for(16), 8);
        assert_eq!(width_for(u32::MAX as u64), 32);
        assert_eq!(width_for(u32::MAX as u64 + 1), 64);
        assert_eq!(width_for(u64::MAX), 64);
    }

    #[test]
    fn two_bit_values_pack_lsb_first() {
        let mut out = Vec::new();
        pack(&[1, 0, 3, 2], 2, &mut out);
        // 01 | 00 << 2 | 11 << 4 | 10 << 6
        assert_eq!(out, vec![0b10_11_00_01]);
        assert_eq!(unpack_one(&out, 2, 2), 3);
    }

    #[test]
    fn every_width_roundtrips() {
        for &w in &BIT_WIDTHS {
            let max = if w == 64 { u64::MAX } else { (1u64 << w).wrapping_sub(1) };
            let values: Vec<u64> = (0..32u64).map(|i| max.wrapping_sub(i * 7) & max).collect();
            let mut out = Vec::new();
            pack(&values, w, &mut out);
            assert_eq!(out.len(), 32 * w as usize / 8);
            for (i, &v) in values.iter().enumerate() {
                assert_eq!(unpack_one(&out, w, i), v, "width {w} index {i}");
            }
        }
    }
}
