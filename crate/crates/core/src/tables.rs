//! Single-bit lookup tables derived by enumerating the carry recurrence.

use serde::Serialize;
use std::fmt;

/// Set of key-bit values consistent with a table cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cell {
    Zero,
    One,
    Either,
    Unreachable,
}

impl Cell {
    fn from_set(zero: bool, one: bool) -> Self {
        match (zero, one) {
            (true, true) => Cell::Either,
            (true, false) => Cell::Zero,
            (false, true) => Cell::One,
            (false, false) => Cell::Unreachable,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cell::Zero => "0",
            Cell::One => "1",
            Cell::Either => "0,1",
            Cell::Unreachable => "-",
        })
    }
}

/// Key table rows: `(y_i, ytilde_{i+1})`.
pub const KEY_TABLE_ROWS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];
/// Key table columns: `(alpha_i, beta_i, c_i)`.
pub const KEY_TABLE_COLS: [(u8, u8, u8); 8] =
    [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)];

/// Carry table rows: `(k_i, c_i)`.
pub const CARRY_TABLE_ROWS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];
/// Carry table columns: `(alpha_i, beta_i, ytilde_i)`.
pub const CARRY_TABLE_COLS: [(u8, u8, u8); 8] =
    [(0, 0, 0), (0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)];

use Cell::{Either as B, One as I, Unreachable as X, Zero as O};

/// Published values of `k_i`.
pub const PUBLISHED_KEY_TABLE: [[Cell; 8]; 4] = [
    [B, B, X, B, B, X, B, B],
    [X, X, B, X, X, B, X, X],
    [O, O, O, O, I, I, I, I],
    [I, I, I, I, O, O, O, O],
];

/// Published values of `ytilde_{i+1}`.
pub const PUBLISHED_CARRY_TABLE: [[u8; 8]; 4] = [
    [0, 0, 0, 1, 0, 0, 0, 1],
    [0, 0, 1, 0, 1, 1, 0, 1],
    [0, 1, 1, 1, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
];

#[inline]
fn majority(a: u8, b: u8, c: u8) -> u8 {
    (a & b) ^ (a & c) ^ (b & c)
}

/// For each cell, the set of `k_i` values reachable by some carry assignment.
pub fn key_table() -> [[Cell; 8]; 4] {
    let mut out = [[X; 8]; 4];
    for (r, &(y, yt_next)) in KEY_TABLE_ROWS.iter().enumerate() {
        for (col, &(a, b, c)) in KEY_TABLE_COLS.iter().enumerate() {
            let (mut zero, mut one) = (false, false);
            for k in 0..2u8 {
                for ct in 0..2u8 {
                    if a ^ b ^ c ^ ct != y {
                        continue;
                    }
                    if majority(k, a, c) ^ majority(k, b, ct) != yt_next {
                        continue;
                    }
                    if k == 0 {
                        zero = true;
                    } else {
                        one = true;
                    }
                }
            }
            out[r][col] = Cell::from_set(zero, one);
        }
    }
    out
}

pub fn carry_table() -> [[Cell; 8]; 4] {
    let mut out = [[X; 8]; 4];
    for (r, &(k, c)) in CARRY_TABLE_ROWS.iter().enumerate() {
        for (col, &(a, b, yt)) in CARRY_TABLE_COLS.iter().enumerate() {
            let ct = yt ^ c;
            let next = majority(k, a, c) ^ majority(k, b, ct);
            out[r][col] = if next == 0 { O } else { I };
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub table: &'static str,
    pub row: (u8, u8),
    pub col: (u8, u8, u8),
    pub published: Cell,
    pub derived: Cell,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TableReport {
    pub cells_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl TableReport {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Regenerates both tables and diffs them against the published values.
pub fn verify_tables() -> TableReport {
    let mut report = TableReport::default();
    let key = key_table();
    for r in 0..4 {
        for c in 0..8 {
            report.cells_checked += 1;
            if key[r][c] != PUBLISHED_KEY_TABLE[r][c] {
                report.mismatches.push(Mismatch {
                    table: "key",
                    row: KEY_TABLE_ROWS[r],
                    col: KEY_TABLE_COLS[c],
                    published: PUBLISHED_KEY_TABLE[r][c],
                    derived: key[r][c],
                });
            }
        }
    }
    let carry = carry_table();
    for r in 0..4 {
        for c in 0..8 {
            report.cells_checked += 1;
            let published = if PUBLISHED_CARRY_TABLE[r][c] == 0 { O } else { I };
            if carry[r][c] != published {
                report.mismatches.push(Mismatch {
                    table: "carry",
                    row: CARRY_TABLE_ROWS[r],
                    col: CARRY_TABLE_COLS[c],
                    published,
                    derived: carry[r][c],
                });
            }
        }
    }
    report
}
