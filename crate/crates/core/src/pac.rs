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

//! Page-aligned collections.
//!
//! A [`Pac`] selects rows of a target vertex table as a sparse, ordered map
//! from page index to a bitmap of `page_rows` bits. Member `b` of page `p`
//! is internal ID `p * page_rows + b`. Pages without members are never
//! stored.

use std::collections::BTreeMap;

/// Fixed-width bitmap over the rows of one page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageBitmap {
    words: Vec<u64>,
}

impl PageBitmap {
    fn new(page_rows: usize) -> Self {
        PageBitmap {
            words: vec![0; page_rows.div_ceil(64)],
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, bit: usize) -> bool {
        self.words.get(bit / 64).is_some_and(|w| w >> (bit % 64) & 1 == 1)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Set bit positions, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + tz)
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pac {
    page_rows: usize,
    entries: BTreeMap<u64, PageBitmap>,
}

impl Pac {
    pub fn new(page_rows: usize) -> Self {
        assert!(page_rows > 0, "page_rows must be positive");
        Pac {
            page_rows,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_ids(ids: impl IntoIterator<Item = u64>, page_rows: usize) -> Self {
        let mut pac = Pac::new(page_rows);
        ids.into_iter().for_each(|id| pac.insert(id));
        pac
    }

    pub fn page_rows(&self) -> usize {
        self.page_rows
    }

    /// Number of non-empty pages.
    pub fn page_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of member IDs.
    pub fn len(&self) -> usize {
        self.entries.values().map(PageBitmap::count_ones).sum()
    }

    pub fn pages(&self) -> impl Iterator<Item = (u64, &PageBitmap)> + '_ {
        self.entries.iter().map(|(&p, b)| (p, b))
    }

    pub fn page(&self, index: u64) -> Option<&PageBitmap> {
        self.entries.get(&index)
    }

    fn locate(&self, id: u64) -> (u64, usize) {
        let pr = self.page_rows as u64;
        (id / pr, (id % pr) as usize)
    }

    pub fn insert(&mut self, id: u64) {
        let (page, bit) = self.locate(id);
        let rows = self.page_rows;
        let bm = self.entries.entry(page).or_insert_with(|| PageBitmap::new(rows));
        bm.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn contains(&self, id: u64) -> bool {
        let (page, bit) = self.locate(id);
        self.entries.get(&page).is_some_and(|b| b.contains(bit))
    }

    /// Member IDs, ascending.
    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        let pr = self.page_rows as u64;
        self.entries
            .iter()
            .flat_map(move |(&p, bm)| bm.iter_ones().map(move |b| p * pr + b as u64))
    }

    pub fn max_id(&self) -> Option<u64> {
        let pr = self.page_rows as u64;
        self.entries
            .iter()
            .next_back()
            .and_then(|(&p, bm)| bm.iter_ones().last().map(|b| p * pr + b as u64))
    }

    /// ORs the low `nbits` bits of `bits` in at absolute position `pos`.
    pub fn set_bits(&mut self, pos: u64, bits: u64, nbits: u32) {
        debug_assert!(nbits <= 64);
        let mut pos = pos;
        let mut bits = if nbits == 64 {
            bits
        } else {
            bits & ((1u64 << nbits) - 1)
        };
        let mut remaining = nbits;
        while remaining > 0 {
            let (page, bit) = self.locate(pos);
            let in_word = 64 - (bit % 64) as u32;
            let in_page = (self.page_rows - bit) as u32;
            let take = remaining.min(in_word).min(in_page);
            let chunk = if take == 64 { bits } else { bits & ((1u64 << take) - 1) };
            if chunk != 0 {
                let rows = self.page_rows;
                let bm = self.entries.entry(page).or_insert_with(|| PageBitmap::new(rows));
                bm.words[bit / 64] |= chunk << (bit % 64);
            }
            bits = if take == 64 { 0 } else { bits >> take };
            pos += take as u64;
            remaining -= take;
        }
    }

    /// Sets every ID in `[start, end)`.
    pub fn set_range(&mut self, start: u64, end: u64) {
        let mut pos = start;
        while pos < end {
            let (_, bit) = self.locate(pos);
            let take = ((64 - bit % 64) as u64).min(end - pos) as u32;
            let bits = if take == 64 { u64::MAX } else { (1u64 << take) - 1 };
            self.set_bits(pos, bits, take);
            pos += take as u64;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_ids_split_across_pages() {
        let pac = Pac::from_ids([1023, 1024], 1024);
        assert_eq!(pac.page_count(), 2);
        assert_eq!(pac.page(0).unwrap().iter_ones().collect::<Vec<_>>(), vec![1023]);
        assert_eq!(pac.page(1).unwrap().iter_ones().collect::<Vec<_>>(), vec![0]);
        assert_eq!(pac.ids().collect::<Vec<_>>(), vec![1023, 1024]);
    }

    #[test]
    fn set_bits_crosses_word_and_page_edges() {
        let mut pac = Pac::new(96);
        pac.set_bits(60, 0b1_0000_0001, 9);
        pac.set_bits(94, 0b1111, 4);
        assert_eq!(pac.ids().collect::<Vec<_>>(), vec![60, 68, 94, 95, 96, 97]);
        assert_eq!(pac.page_count(), 2);
    }

    #[test]
    fn zero_bits_create_no_pages() {
        let mut pac = Pac::new(64);
        pac.set_bits(100, 0, 64);
        assert!(pac.is_empty());
    }

    #[test]
    fn ranges_fill_exactly() {
        let mut pac = Pac::new(1024);
        pac.set_range(1000, 1100);
        pac.set_range(5, 6);
        let ids: Vec<u64> = pac.ids().collect();
        let expected: Vec<u64> = std::iter::once(5).chain(1000..1100).collect();
        assert_eq!(ids, expected);
        assert_eq!(pac.len(), 101);
        assert_eq!(pac.max_id(), Some(1099));
    }
}
