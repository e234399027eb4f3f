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

//! Interval (run-length) encoding of boolean pages.
//!
//! A page of `n` booleans is described by `first_value` and a boundary list
//! `P` with `P[0] = 0`, `P[last] = n`, strictly increasing. Interval `i` is
//! `[P[i], P[i+1])` and carries `first_value ^ (i is odd)`.
//!
//! Only the interior boundaries are stored, as u16, since the endpoints are
//! implied by the page row count:
//!
//! ```text
//! first_value u8 | interior_count u16 | interior u16 * interior_count
//! ```
//!
//! so a page costs exactly `3 + 2 * (|P| - 2)` bytes.

use crate::error::{GarError, Result};

pub const INTERVAL_HEADER_BYTES: usize = 3;
pub const BOUNDARY_BYTES: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPage {
    pub first_value: bool,
    /// Full boundary list including `0` and the row count.
    pub boundaries: Vec<u32>,
}

impl IntervalPage {
    pub fn encode(values: &[bool]) -> IntervalPage {
        assert!(!values.is_empty(), "an interval page holds at least one row");
        let mut boundaries = vec![0u32];
        for (i, w) in values.windows(2).enumerate() {
            if w[0] != w[1] {
                boundaries.push(i as u32 + 1);
            }
        }
        boundaries.push(values.len() as u32);
        IntervalPage {
            first_value: values[0],
            boundaries,
        }
    }

    pub fn row_count(&self) -> usize {
        *self.boundaries.last().unwrap_or(&0) as usize
    }

    pub fn interval_count(&self) -> usize {
        self.boundaries.len().saturating_sub(1)
    }

    pub fn interval_value(&self, i: usize) -> bool {
        self.first_value ^ (i % 2 == 1)
    }

    pub fn encoded_len(&self) -> usize {
        INTERVAL_HEADER_BYTES + BOUNDARY_BYTES * (self.boundaries.len() - 2)
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        let interior = &self.boundaries[1..self.boundaries.len() - 1];
        out.push(self.first_value as u8);
        out.extend_from_slice(&(interior.len() as u16).to_le_bytes());
        for &b in interior {
            out.extend_from_slice(&(b as u16).to_le_bytes());
        }
    }

    pub fn parse(payload: &[u8], rows: usize) -> Result<IntervalPage> {
        let corrupt = |msg: &str| GarError::Corrupt(format!("interval page: {msg}"));
        if rows == 0 || rows > 1 << 16 {
            return Err(corrupt("row count outside 1..=65536"));
        }
        if payload.len() < INTERVAL_HEADER_BYTES {
            return Err(corrupt("truncated header"));
        }
        let first_value = match payload[0] {
            0 => false,
            1 => true,
            _ => return Err(corrupt("first value is not a bit")),
        };
        let count = u16::from_le_bytes([payload[1], payload[2]]) as usize;
        if payload.len() != INTERVAL_HEADER_BYTES + BOUNDARY_BYTES * count {
            return Err(corrupt("length does not match boundary count"));
        }
        let mut boundaries = Vec::with_capacity(count + 2);
        boundaries.push(0u32);
        for chunk in payload[INTERVAL_HEADER_BYTES..].chunks_exact(BOUNDARY_BYTES) {
            boundaries.push(u16::from_le_bytes([chunk[0], chunk[1]]) as u32);
        }
        boundaries.push(rows as u32);
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(corrupt("boundaries not strictly increasing"));
        }
        Ok(IntervalPage {
            first_value,
            boundaries,
        })
    }

    pub fn decode(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.row_count());
        for (i, w) in self.boundaries.windows(2).enumerate() {
            let v = self.interval_value(i);
            out.extend(std::iter::repeat_n(v, (w[1] - w[0]) as usize));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_become_boundaries() {
        let page = IntervalPage::encode(&[true, true, true, false, false, true]);
        assert!(page.first_value);
        assert_eq!(page.boundaries, vec![0, 3, 5, 6]);
        assert_eq!(page.decode(), vec![true, true, true, false, false, true]);
    }

    #[test]
    fn size_law_holds() {
        let page = IntervalPage::encode(&[false, true, false, false]);
        let mut bytes = Vec::new();
        page.write_to(&mut bytes);
        assert_eq!(bytes.len(), 3 + 2 * (page.boundaries.len() - 2));
        assert_eq!(IntervalPage::parse(&bytes, 4).unwrap(), page);
    }

    #[test]
    fn constant_page_has_no_interior() {
        let page = IntervalPage::encode(&[true; 10]);
        assert_eq!(page.boundaries, vec![0, 10]);
        assert_eq!(page.encoded_len(), 3);
    }

    #[test]
    fn rejects_unordered_boundaries() {
        // interior boundary equal to the row count
        let bytes = [1u8, 1, 0, 4, 0];
        assert!(IntervalPage::parse(&bytes, 4).is_err());
        let bytes = [2u8, 0, 0];
        assert!(IntervalPage::parse(&bytes, 4).is_err());
    }
}
