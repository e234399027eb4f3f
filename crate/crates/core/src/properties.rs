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

//! Selection pushdown: read property or label values for the rows a PAC
//! names, decoding one page per PAC entry.

use crate::colstore::{ColumnFile, Value};
use crate::error::{GarError, Result};
use crate::pac::Pac;

fn check(column: &ColumnFile, pac: &Pac) -> Result<()> {
    if !column.is_aligned_to(pac.page_rows()) {
        return Err(GarError::PageRowsMismatch {
            requested: pac.page_rows(),
        });
    }
    if let Some(max) = pac.max_id() {
        if max >= column.total_rows() {
            return Err(GarError::MemberOutOfRange {
                id: max,
                total: column.total_rows(),
            });
        }
    }
    Ok(())
}

/// `(id, value)` for every PAC member, ascending by id.
pub fn fetch_by_pac(column: &ColumnFile, pac: &Pac) -> Result<Vec<(u64, Value)>> {
    check(column, pac)?;
    let pr = pac.page_rows() as u64;
    let mut out = Vec::with_capacity(pac.len());
    for (page, bitmap) in pac.pages() {
        let values = column.read_page(page as usize)?;
        for bit in bitmap.iter_ones() {
            let v = values.get(bit).expect("member checked against row count");
            out.push((page * pr + bit as u64, v));
        }
    }
    Ok(out)
}

/// Label values of every PAC member, one flag per column in `columns` order.
/// Values come from interval parity; rows are never expanded to booleans.
pub fn fetch_labels_by_pac(columns: &[&ColumnFile], pac: &Pac) -> Result<Vec<(u64, Vec<bool>)>> {
    for col in columns {
        check(col, pac)?;
    }
    let pr = pac.page_rows() as u64;
    let mut out: Vec<(u64, Vec<bool>)> = pac.ids().map(|id| (id, Vec::with_capacity(columns.len()))).collect();
    for col in columns {
        let mut at = 0;
        for (page, bitmap) in pac.pages() {
            let ip = col.interval_page(page as usize)?;
            let mut interval = 0;
            for bit in bitmap.iter_ones() {
                while ip.boundaries[interval + 1] as usize <= bit {
                    interval += 1;
                }
                debug_assert_eq!(out[at].0, page * pr + bit as u64);
                out[at].1.push(ip.interval_value(interval));
                at += 1;
            }
        }
    }
    Ok(out)
}
