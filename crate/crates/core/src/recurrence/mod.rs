//! Exact evaluation of the leaf-count recurrence
//!
//! ```text
//! T(s, a, b, f) = max { 2T(s-3, a+1, b, f-4),
//!                       2T(s-3, a, b+1, f),
//!                       T(s-5, a, b, f-2) + T(s-2, a, b, f-2),
//!                       2T(s-4, a, b, f),
//!                       T(s-4, a, b, f-2) + T(s-3, a, b, f-2) }
//! ```
//!
//! for a fixed order `n`, where `a` and `b` count A- and B-branches on the
//! path. Base cases, in order: `T = 0` if `s < 0` or `f < 0`; `T = 0` if
//! `3a + 7b > n`; `T = 1` if `s = 0`; `T = 1` if every line (taking the
//! smaller term of the two-term lines) is 0.

mod bound;

use std::collections::HashMap;

use num_bigint::BigUint;
use thiserror::Error;

pub use bound::{
    bound_exponent, check_dominance, pow2_bounds, pow2_decimal, verify_constraints, BoundParams, ConstraintCheck, ConstraintReport,
    DominanceReport,
};

pub const MAX_N: usize = 200;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error("n = {0} is outside 1..={MAX_N}")]
    OutOfRange(usize),
}

/// A recurrence state; the order `n` is fixed by the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecurrenceState {
    pub s: i64,
    pub a: u32,
    pub b: u32,
    pub f: i64,
}

impl RecurrenceState {
    pub fn start(n: usize) -> RecurrenceState {
        RecurrenceState { s: n as i64, a: 0, b: 0, f: n as i64 }
    }

    fn key(self) -> u64 {
        // s, f <= 200 and a, b <= 67 fit in 16 bits each
        (self.s as u64) << 48 | (self.a as u64) << 32 | (self.b as u64) << 16 | self.f as u64
    }

    fn from_key(k: u64) -> RecurrenceState {
        RecurrenceState { s: (k >> 48) as i64, a: (k >> 32) as u16 as u32, b: (k >> 16) as u16 as u32, f: k as u16 as i64 }
    }
}

/// Memoized values of `T` for one `n`. Values fit in `u128` for every
/// `n <= 200` (`log2 T(200) < 67`); additions are checked regardless.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    n: usize,
    memo: HashMap<u64, u128>,
}

impl RecurrenceTable {
    pub fn new(n: usize) -> Result<RecurrenceTable, RecurrenceError> {
        if n == 0 || n > MAX_N {
            return Err(RecurrenceError::OutOfRange(n));
        }
        Ok(RecurrenceTable { n, memo: HashMap::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&mut self, st: RecurrenceState) -> u128 {
        if st.s < 0 || st.f < 0 {
            return 0;
        }
        if 3 * st.a as u64 + 7 * st.b as u64 > self.n as u64 {
            return 0;
        }
        if st.s == 0 {
            return 1;
        }
        if let Some(&v) = self.memo.get(&st.key()) {
            return v;
        }
        let RecurrenceState { s, a, b, f } = st;
        let mut t = |s, a, b, f| self.value(RecurrenceState { s, a, b, f });
        let l1 = t(s - 3, a + 1, b, f - 4);
        let l2 = t(s - 3, a, b + 1, f);
        let l3 = (t(s - 5, a, b, f - 2), t(s - 2, a, b, f - 2));
        let l4 = t(s - 4, a, b, f);
        let l5 = (t(s - 4, a, b, f - 2), t(s - 3, a, b, f - 2));
        let v = if [l1, l2, l3.0.min(l3.1), l4, l5.0.min(l5.1)].iter().all(|&x| x == 0) {
            1
        } else {
            let add = |x: u128, y: u128| x.checked_add(y).expect("recurrence value overflows u128");
            [add(l1, l1), add(l2, l2), add(l3.0, l3.1), add(l4, l4), add(l5.0, l5.1)].into_iter().max().unwrap()
        };
        self.memo.insert(st.key(), v);
        v
    }

    /// Every memoized state with its value, in state order.
    pub fn states(&self) -> Vec<(RecurrenceState, u128)> {
        let mut out: Vec<_> = self.memo.iter().map(|(&k, &v)| (RecurrenceState::from_key(k), v)).collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceValue {
    pub n: usize,
    pub value: BigUint,
    pub log2: f64,
}

pub fn log2_u128(v: u128) -> f64 {
    (v as f64).log2()
}

/// `T` at the start state `(s, a, b, f) = (n, 0, 0, n)`.
pub fn eval_t(n: usize) -> Result<RecurrenceValue, RecurrenceError> {
    let mut table = RecurrenceTable::new(n)?;
    let v = table.value(RecurrenceState::start(n));
    Ok(RecurrenceValue { n, value: BigUint::from(v), log2: log2_u128(v) })
}

/// Unmemoized evaluation, for cross-checking the table on small `n`.
pub fn naive_t(n: usize, st: RecurrenceState) -> u128 {
    let RecurrenceState { s, a, b, f } = st;
    if s < 0 || f < 0 || 3 * a as u64 + 7 * b as u64 > n as u64 {
        return 0;
    }
    if s == 0 {
        return 1;
    }
    let t = |s, a, b, f| naive_t(n, RecurrenceState { s, a, b, f });
    let lines = [
        (t(s - 3, a + 1, b, f - 4), t(s - 3, a + 1, b, f - 4)),
        (t(s - 3, a, b + 1, f), t(s - 3, a, b + 1, f)),
        (t(s - 5, a, b, f - 2), t(s - 2, a, b, f - 2)),
        (t(s - 4, a, b, f), t(s - 4, a, b, f)),
        (t(s - 4, a, b, f - 2), t(s - 3, a, b, f - 2)),
    ];
    if lines.iter().all(|&(x, y)| x.min(y) == 0) {
        1
    } else {
        lines.iter().map(|&(x, y)| x + y).max().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RecurrenceRow {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: String,
    #[serde(rename = "log2T")]
    pub log2_t: String,
    #[serde(rename = "log2R")]
    pub log2_r: String,
}

/// One row per `n` in `1..=max_n`: `T`, `log2 T` and the bound exponent at
/// the start state under `params`.
pub fn recurrence_rows(max_n: usize, params: &BoundParams) -> Result<Vec<RecurrenceRow>, RecurrenceError> {
    (1..=max_n)
        .map(|n| {
            let v = eval_t(n)?;
            let r = bound_exponent(n, RecurrenceState::start(n), params);
            Ok(RecurrenceRow {
                n,
                t: v.value.to_string(),
                log2_t: format!("{:.6}", v.log2),
                log2_r: format!("{:.6}", num_traits::ToPrimitive::to_f64(&r).unwrap()),
            })
        })
        .collect()
}

pub fn write_recurrence_csv<W: std::io::Write>(rows: &[RecurrenceRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
