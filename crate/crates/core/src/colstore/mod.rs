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

//! Page-based column files.
//!
//! A column file is a header, a page directory, the page payloads and a
//! trailing CRC32C, all little-endian:
//!
//! ```text
//! "GAR1" | version u16 | codec u8 | physical u8 | total_rows u64 | page_count u32
//! | { byte_offset u64 | row_count u32 } * page_count
//! | payloads
//! | crc32c u32   (over every preceding byte)
//! ```
//!
//! Pages hold a fixed number of rows (the archive's page row capacity), except
//! the last one, so page `i` always covers rows `[i * page_rows, ...)`. Every
//! page access through a [`ColumnFile`] bumps its page-read counter.

pub mod bitpack;
pub mod delta;
pub mod plain;
pub mod rle;
mod values;

use std::fs;
use std::ops::Range;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

pub use delta::{DeltaPage, Miniblock, MINIBLOCK_SIZE};
pub use rle::IntervalPage;
pub use values::{ColumnValues, Value};

use crate::error::{GarError, Result};

pub const MAGIC: &[u8; 4] = b"GAR1";
pub const FORMAT_VERSION: u16 = 1;
pub const DEFAULT_PAGE_ROWS: usize = 1024;
pub const MAX_PAGE_ROWS: usize = 1 << 16;

/// Bytes before the page directory.
pub const HEADER_BYTES: usize = 20;
pub const DIRECTORY_ENTRY_BYTES: usize = 12;
pub const CRC_BYTES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Codec {
    Plain,
    Delta,
    RleBool,
}

impl Codec {
    fn tag(self) -> u8 {
        match self {
            Codec::Plain => 0,
            Codec::Delta => 1,
            Codec::RleBool => 2,
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(Codec::Plain),
            1 => Ok(Codec::Delta),
            2 => Ok(Codec::RleBool),
            _ => Err(GarError::Corrupt(format!("unknown codec tag {tag}"))),
        }
    }

    pub fn supports(self, physical: PhysicalType) -> bool {
        match self {
            Codec::Plain => true,
            Codec::Delta => physical == PhysicalType::Int64,
            Codec::RleBool => physical == PhysicalType::Bool,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhysicalType {
    Int64,
    Float64,
    String,
    Bool,
}

impl PhysicalType {
    fn tag(self) -> u8 {
        match self {
            PhysicalType::Int64 => 0,
            PhysicalType::Float64 => 1,
            PhysicalType::String => 2,
            PhysicalType::Bool => 3,
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(PhysicalType::Int64),
            1 => Ok(PhysicalType::Float64),
            2 => Ok(PhysicalType::String),
            3 => Ok(PhysicalType::Bool),
            _ => Err(GarError::Corrupt(format!("unknown physical type tag {tag}"))),
        }
    }
}

pub fn validate_page_rows(page_rows: usize) -> Result<usize> {
    if page_rows.is_power_of_two() && page_rows <= MAX_PAGE_ROWS {
        Ok(page_rows)
    } else {
        Err(GarError::InvalidPageRows(page_rows))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PageEntry {
    pub byte_offset: u64,
    pub row_count: u32,
}

/// Sizes reported by [`ColumnFile::stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnStats {
    /// Bytes of page payloads only.
    pub payload_bytes: u64,
    /// Whole file: header, directory, payloads and checksum.
    pub file_bytes: u64,
    pub rows: u64,
    pub pages: u64,
}

/// Serializes `values` into the column file format.
pub fn encode_column(values: &ColumnValues, codec: Codec, page_rows: usize) -> Result<Vec<u8>> {
    validate_page_rows(page_rows)?;
    let physical = values.physical_type();
    if !codec.supports(physical) {
        return Err(GarError::IncompatibleCodec { codec, physical });
    }
    let rows = values.len();
    let page_count = rows.div_ceil(page_rows);

    let mut payload = Vec::new();
    let mut directory = Vec::with_capacity(page_count);
    let payload_start = (HEADER_BYTES + DIRECTORY_ENTRY_BYTES * page_count) as u64;
    for p in 0..page_count {
        let range = p * page_rows..((p + 1) * page_rows).min(rows);
        directory.push(PageEntry {
            byte_offset: payload_start + payload.len() as u64,
            row_count: range.len() as u32,
        });
        match (codec, values) {
            (Codec::Plain, _) => plain::encode_page(&values.slice(range), &mut payload),
            (Codec::Delta, ColumnValues::Int64(v)) => DeltaPage::encode(&v[range]).write_to(&mut payload),
            (Codec::RleBool, ColumnValues::Bool(v)) => IntervalPage::encode(&v[range]).write_to(&mut payload),
            _ => unreachable!("codec compatibility checked above"),
        }
    }

    let mut out = Vec::with_capacity(payload_start as usize + payload.len() + CRC_BYTES);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.push(codec.tag());
    out.push(physical.tag());
    out.extend_from_slice(&(rows as u64).to_le_bytes());
    out.extend_from_slice(&(page_count as u32).to_le_bytes());
    for entry in &directory {
        out.extend_from_slice(&entry.byte_offset.to_le_bytes());
        out.extend_from_slice(&entry.row_count.to_le_bytes());
    }
    out.extend_from_slice(&payload);
    let crc = crc32c::crc32c(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    Ok(out)
}

/// Encodes `values` and writes them to `path`, returning the opened column.
pub fn write_column(
    path: impl AsRef<Path>,
    values: &ColumnValues,
    codec: Codec,
    page_rows: usize,
) -> Result<ColumnFile> {
    let path = path.as_ref();
    let bytes = encode_column(values, codec, page_rows)?;
    fs::write(path, &bytes).map_err(|e| GarError::io(path, e))?;
    ColumnFile::from_bytes(bytes)
}

/// An opened, checksum-verified column file.
///
/// Handles are immutable apart from the page-read counter, which is atomic,
/// so a handle can be shared freely between threads.
#[derive(Debug)]
pub struct ColumnFile {
    codec: Codec,
    physical: PhysicalType,
    total_rows: u64,
    pages: Vec<PageEntry>,
    /// First row of each page, plus `total_rows` as sentinel.
    row_starts: Vec<u64>,
    bytes: Vec<u8>,
    pages_read: AtomicU64,
}

impl ColumnFile {
    pub fn open(path: impl AsRef<Path>) -> Result<ColumnFile> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| GarError::io(path, e))?;
        ColumnFile::from_bytes(bytes)
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<ColumnFile> {
        let corrupt = |msg: String| GarError::Corrupt(msg);
        if bytes.len() < HEADER_BYTES + CRC_BYTES {
            return Err(corrupt(format!("file of {} bytes is too short", bytes.len())));
        }
        let body_len = bytes.len() - CRC_BYTES;
        let stored_crc = u32::from_le_bytes(bytes[body_len..].try_into().unwrap());
        let actual_crc = crc32c::crc32c(&bytes[..body_len]);
        if stored_crc != actual_crc {
            return Err(corrupt(format!(
                "checksum mismatch (stored {stored_crc:#010x}, computed {actual_crc:#010x})"
            )));
        }
        if &bytes[0..4] != MAGIC {
            return Err(corrupt("bad magic".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != FORMAT_VERSION {
            return Err(corrupt(format!("unsupported format version {version}")));
        }
        let codec = Codec::from_tag(bytes[6])?;
        let physical = PhysicalType::from_tag(bytes[7])?;
        if !codec.supports(physical) {
            return Err(GarError::IncompatibleCodec { codec, physical });
        }
        let total_rows = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        let page_count = u32::from_le_bytes(bytes[16..20].try_into().unwrap()) as usize;
        let payload_start = page_count
            .checked_mul(DIRECTORY_ENTRY_BYTES)
            .and_then(|d| d.checked_add(HEADER_BYTES))
            .filter(|&s| s <= body_len)
            .ok_or_else(|| corrupt("page directory overruns file".into()))?;

        let mut pages: Vec<PageEntry> = Vec::with_capacity(page_count);
        let mut row_starts = Vec::with_capacity(page_count + 1);
        let mut rows_seen = 0u64;
        let mut expected_offset = payload_start as u64;
        for p in 0..page_count {
            let at = HEADER_BYTES + p * DIRECTORY_ENTRY_BYTES;
            let byte_offset = u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap());
            let row_count = u32::from_le_bytes(bytes[at + 8..at + 12].try_into().unwrap());
            if p == 0 && byte_offset != expected_offset {
                return Err(corrupt("first page does not follow the directory".into()));
            }
            if byte_offset < expected_offset || byte_offset > body_len as u64 {
                return Err(corrupt(format!("page {p} has offset {byte_offset} out of order")));
            }
            if row_count == 0 {
                return Err(corrupt(format!("page {p} is empty")));
            }
            if p > 0 && p + 1 < page_count && row_count != pages[0].row_count {
                return Err(corrupt(format!("page {p} has irregular row count {row_count}")));
            }
            if p > 0 && row_count > pages[0].row_count {
                return Err(corrupt(format!("final page {p} exceeds page row capacity")));
            }
            expected_offset = byte_offset;
            row_starts.push(rows_seen);
            rows_seen += row_count as u64;
            pages.push(PageEntry { byte_offset, row_count });
        }
        row_starts.push(rows_seen);
        if rows_seen != total_rows {
            return Err(corrupt(format!(
                "pages hold {rows_seen} rows but header declares {total_rows}"
            )));
        }
        if page_count == 0 && body_len != payload_start {
            return Err(corrupt("payload bytes in a column without pages".into()));
        }
        Ok(ColumnFile {
            codec,
            physical,
            total_rows,
            pages,
            row_starts,
            bytes,
            pages_read: AtomicU64::new(0),
        })
    }

    pub fn codec(&self) -> Codec {
        self.codec
    }

    pub fn physical_type(&self) -> PhysicalType {
        self.physical
    }

    pub fn total_rows(&self) -> u64 {
        self.total_rows
    }

    pub fn page_count(&self) -> usize {
        self.pages.len()
    }

    pub fn page_directory(&self) -> &[PageEntry] {
        &self.pages
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Page row capacity, when the directory pins it down (two or more pages).
    pub fn page_rows(&self) -> Option<usize> {
        (self.pages.len() >= 2).then(|| self.pages[0].row_count as usize)
    }

    /// Whether page `i` of this column covers rows `[i * page_rows, ...)`.
    pub fn is_aligned_to(&self, page_rows: usize) -> bool {
        let n = self.pages.len();
        self.pages.iter().enumerate().all(|(i, p)| {
            let rows = p.row_count as usize;
            if i + 1 < n {
                rows == page_rows
            } else {
                rows <= page_rows
            }
        })
    }

    pub fn pages_read(&self) -> u64 {
        self.pages_read.load(Ordering::Relaxed)
    }

    pub fn reset_pages_read(&self) {
        self.pages_read.store(0, Ordering::Relaxed);
    }

    pub fn stats(&self) -> ColumnStats {
        let payload_start = HEADER_BYTES + DIRECTORY_ENTRY_BYTES * self.pages.len();
        ColumnStats {
            payload_bytes: (self.bytes.len() - CRC_BYTES - payload_start) as u64,
            file_bytes: self.bytes.len() as u64,
            rows: self.total_rows,
            pages: self.pages.len() as u64,
        }
    }

    /// Pages intersecting rows `[start, end)`; empty for an empty range.
    pub fn pages_for_range(&self, start: u64, end: u64) -> Range<usize> {
        if start >= end {
            return 0..0;
        }
        let first = self.row_starts.partition_point(|&s| s <= start) - 1;
        let last = self.row_starts.partition_point(|&s| s < end);
        first..last
    }

    /// First row covered by page `page`.
    pub fn page_first_row(&self, page: usize) -> u64 {
        self.row_starts[page]
    }

    fn payload(&self, page: usize) -> &[u8] {
        let start = self.pages[page].byte_offset as usize;
        let end = self
            .pages
            .get(page + 1)
            .map(|p| p.byte_offset as usize)
            .unwrap_or(self.bytes.len() - CRC_BYTES);
        &self.bytes[start..end]
    }

    fn check_page(&self, page: usize) -> Result<()> {
        if page < self.pages.len() {
            Ok(())
        } else {
            Err(GarError::RangeOutOfBounds {
                start: page as u64,
                end: page as u64 + 1,
                total: self.pages.len() as u64,
            })
        }
    }

    fn touch(&self) {
        self.pages_read.fetch_add(1, Ordering::Relaxed);
    }

    /// Decodes every row of page `page`.
    pub fn read_page(&self, page: usize) -> Result<ColumnValues> {
        self.check_page(page)?;
        self.touch();
        let rows = self.pages[page].row_count as usize;
        let payload = self.payload(page);
        match self.codec {
            Codec::Plain => plain::decode_page(payload, rows, self.physical),
            Codec::Delta => Ok(ColumnValues::Int64(
                DeltaPage::parse(payload, rows)?.decode_scalar(rows)?,
            )),
            Codec::RleBool => Ok(ColumnValues::Bool(IntervalPage::parse(payload, rows)?.decode())),
        }
    }

    /// Structured view of a DELTA page.
    pub fn delta_page(&self, page: usize) -> Result<DeltaPage> {
        if self.codec != Codec::Delta {
            return Err(GarError::Corrupt(format!("{:?} column has no delta pages", self.codec)));
        }
        self.check_page(page)?;
        self.touch();
        DeltaPage::parse(self.payload(page), self.pages[page].row_count as usize)
    }

    /// Structured view of an RLE_BOOL page.
    pub fn interval_page(&self, page: usize) -> Result<IntervalPage> {
        if self.codec != Codec::RleBool {
            return Err(GarError::Corrupt(format!(
                "{:?} column has no interval pages",
                self.codec
            )));
        }
        self.check_page(page)?;
        self.touch();
        IntervalPage::parse(self.payload(page), self.pages[page].row_count as usize)
    }

    /// Values of rows `[start, end)`, touching only the pages that intersect it.
    pub fn read_rows(&self, start: u64, end: u64) -> Result<ColumnValues> {
        if start > end || end > self.total_rows {
            return Err(GarError::RangeOutOfBounds {
                start,
                end,
                total: self.total_rows,
            });
        }
        let mut out = ColumnValues::empty(self.physical);
        for page in self.pages_for_range(start, end) {
            let first = self.row_starts[page];
            let last = self.row_starts[page + 1];
            let lo = (start.max(first) - first) as usize;
            let hi = (end.min(last) - first) as usize;
            let part = if self.codec == Codec::Delta {
                // Page-local decode stops at the last requested row.
                self.touch();
                let dp = DeltaPage::parse(self.payload(page), (last - first) as usize)?;
                let mut v = dp.decode_scalar(hi)?;
                v.drain(..lo);
                ColumnValues::Int64(v)
            } else {
                let values = self.read_page(page)?;
                if lo == 0 && hi == values.len() {
                    values
                } else {
                    values.slice(lo..hi)
                }
            };
            out.extend_from(part);
        }
        Ok(out)
    }

    pub fn read_all(&self) -> Result<ColumnValues> {
        self.read_rows(0, self.total_rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(n: i64) -> ColumnValues {
        ColumnValues::Int64((0..n).map(|i| i * 3 - 7).collect())
    }

    #[test]
    fn incompatible_codec_is_rejected() {
        let err = encode_column(&ColumnValues::Float64(vec![1.0]), Codec::Delta, 1024).unwrap_err();
        assert!(matches!(err, GarError::IncompatibleCodec { .. }));
        let err = encode_column(&ColumnValues::Int64(vec![1]), Codec::RleBool, 1024).unwrap_err();
        assert!(matches!(err, GarError::IncompatibleCodec { .. }));
    }

    #[test]
    fn non_power_of_two_page_rows_rejected() {
        assert!(matches!(
            encode_column(&ints(3), Codec::Plain, 1000),
            Err(GarError::InvalidPageRows(1000))
        ));
    }

    #[test]
    fn empty_column_is_header_only() {
        let col = ColumnFile::from_bytes(encode_column(&ints(0), Codec::Delta, 1024).unwrap()).unwrap();
        let stats = col.stats();
        assert_eq!(stats.payload_bytes, 0);
        assert_eq!(stats.file_bytes, (HEADER_BYTES + CRC_BYTES) as u64);
        assert_eq!((stats.rows, stats.pages), (0, 0));
        assert_eq!(col.read_rows(0, 0).unwrap(), ColumnValues::Int64(vec![]));
    }

    #[test]
    fn plain_int_payload_is_eight_bytes_per_row() {
        let col = ColumnFile::from_bytes(encode_column(&ints(1024), Codec::Plain, 1024).unwrap()).unwrap();
        assert_eq!(col.stats().payload_bytes, 8192);
        assert_eq!(col.stats().pages, 1);
    }

    #[test]
    fn read_inside_one_page_touches_one_page() {
        let values = ints(3000);
        let col = ColumnFile::from_bytes(encode_column(&values, Codec::Delta, 1024).unwrap()).unwrap();
        assert_eq!(col.page_count(), 3);
        let got = col.read_rows(1024, 1030).unwrap();
        assert_eq!(got, values.slice(1024..1030));
        assert_eq!(col.pages_read(), 1);

        col.reset_pages_read();
        assert_eq!(col.read_rows(0, 0).unwrap().len(), 0);
        assert_eq!(col.pages_read(), 0);
    }

    #[test]
    fn page_ranges_follow_directory() {
        let col = ColumnFile::from_bytes(encode_column(&ints(3000), Codec::Plain, 1024).unwrap()).unwrap();
        assert_eq!(col.pages_for_range(0, 1), 0..1);
        assert_eq!(col.pages_for_range(1023, 1025), 0..2);
        assert_eq!(col.pages_for_range(1024, 2048), 1..2);
        assert_eq!(col.pages_for_range(2048, 3000), 2..3);
        assert_eq!(col.pages_for_range(5, 5), 0..0);
        assert_eq!(col.page_rows(), Some(1024));
        assert!(col.is_aligned_to(1024));
        assert!(!col.is_aligned_to(512));
    }

    #[test]
    fn out_of_bounds_range_rejected() {
        let col = ColumnFile::from_bytes(encode_column(&ints(10), Codec::Plain, 8).unwrap()).unwrap();
        assert!(matches!(col.read_rows(5, 11), Err(GarError::RangeOutOfBounds { .. })));
        assert!(col.read_rows(6, 5).is_err());
    }

    #[test]
    fn flipped_byte_fails_checksum() {
        let mut bytes = encode_column(&ints(100), Codec::Delta, 64).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x40;
        let err = ColumnFile::from_bytes(bytes).unwrap_err();
        assert!(err.to_string().contains("checksum"));
    }

    #[test]
    fn header_fields_are_bit_exact() {
        let bytes = encode_column(&ColumnValues::Bool(vec![true, true, false]), Codec::RleBool, 1024).unwrap();
        assert_eq!(&bytes[0..4], b"GAR1");
        assert_eq!(&bytes[4..6], &[1, 0]);
        assert_eq!(bytes[6], 2);
        assert_eq!(bytes[7], 3);
        assert_eq!(&bytes[8..16], &3u64.to_le_bytes());
        assert_eq!(&bytes[16..20], &1u32.to_le_bytes());
        assert_eq!(&bytes[20..28], &32u64.to_le_bytes());
        assert_eq!(&bytes[28..32], &3u32.to_le_bytes());
        // first_value 1, one interior boundary at 2
        assert_eq!(&bytes[32..37], &[1, 1, 0, 2, 0]);
        assert_eq!(bytes.len(), 41);
    }
}
