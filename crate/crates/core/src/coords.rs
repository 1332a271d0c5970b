//! Integer coordinates of tight generalised curve diagrams.
//!
//! A tuple `(s_0, a_1, s_1, a_2, ..., a_n, s_n)` describes a tight
//! generalised curve diagram on `n` punctures. `s_i` is the half-count of the
//! intersections of the diagram with the vertical line `L_i` (there are
//! `2 s_i + 1` of them), and `a_i` fixes how the arcs inside zone `i` are
//! shifted with respect to each other. A tuple is *virtual* when it satisfies
//!
//! * `s_0 = s_n = 0`,
//! * `0 <= a_i <= 2 min(s_{i-1}, s_i) + [s_{i-1} != s_i]` for `1 <= i <= n`.
//!
//! Every virtual tuple is realised by exactly one tight generalised diagram
//! (see [`crate::diagram`]); the ones whose diagram is connected are the
//! coordinates of braids.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("expected {expected} entries for n = {n}, got {got}")]
    DimensionMismatch { n: usize, expected: usize, got: usize },
    #[error("entry {position} is negative ({value})")]
    Negative { position: usize, value: i64 },
    #[error("entry {position} does not fit in 32 bits ({value})")]
    TooLarge { position: usize, value: i64 },
    #[error("boundary s_{index} must be 0, got {value}")]
    BoundaryNonZero { index: usize, value: u32 },
    #[error("a_{index} = {value} is outside 0..={max}")]
    AOutOfRange { index: usize, value: u32, max: u32 },
    #[error("cannot parse coordinates {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Largest admissible `a_i` between lines with half-counts `left` and `right`.
#[inline]
pub fn a_max(left: u32, right: u32) -> u32 {
    2 * left.min(right) + u32::from(left != right)
}

/// A validated virtual coordinate tuple.
///
/// `s` holds `s_0..=s_n` (length `n + 1`) and `a` holds `a_1..=a_n`
/// (length `n`, so `a[i - 1]` is `a_i`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VirtualCoordinates {
    s: Vec<u32>,
    a: Vec<u32>,
}

impl VirtualCoordinates {
    /// Validates an interleaved tuple `(s_0, a_1, s_1, ..., a_n, s_n)`.
    pub fn validate(n: usize, raw: &[i64]) -> Result<Self, CoordError> {
        if n == 0 {
            return Err(CoordError::NoStrands);
        }
        if raw.len() != 2 * n + 1 {
            return Err(CoordError::DimensionMismatch {
                n,
                expected: 2 * n + 1,
                got: raw.len(),
            });
        }
        let mut vals = Vec::with_capacity(raw.len());
        for (position, &value) in raw.iter().enumerate() {
            if value < 0 {
                return Err(CoordError::Negative { position, value });
            }
            let v = u32::try_from(value).map_err(|_| CoordError::TooLarge { position, value })?;
            vals.push(v);
        }
        let s = vals.iter().step_by(2).copied().collect();
        let a = vals.iter().skip(1).step_by(2).copied().collect();
        Self::from_parts(s, a)
    }

    /// Builds a tuple from the separate `s` (length `n + 1`) and `a`
    /// (length `n`) vectors.
    pub fn from_parts(s: Vec<u32>, a: Vec<u32>) -> Result<Self, CoordError> {
        let n = a.len();
        if n == 0 {
            return Err(CoordError::NoStrands);
        }
        if s.len() != n + 1 {
            return Err(CoordError::DimensionMismatch {
                n,
                expected: 2 * n + 1,
                got: s.len() + a.len(),
            });
        }
        for index in [0, n] {
            if s[index] != 0 {
                return Err(CoordError::BoundaryNonZero { index, value: s[index] });
            }
        }
        for i in 1..=n {
            let max = a_max(s[i - 1], s[i]);
            if a[i - 1] > max {
                return Err(CoordError::AOutOfRange { index: i, value: a[i - 1], max });
            }
        }
        Ok(Self { s, a })
    }

    /// The all-zero tuple (coordinates of the trivial braid).
    pub fn trivial(n: usize) -> Self {
        assert!(n >= 1, "strand count must be at least 1");
        Self { s: vec![0; n + 1], a: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    /// `s_i` for `0 <= i <= n`.
    pub fn s_at(&self, i: usize) -> u32 {
        self.s[i]
    }

    /// `a_i` for `1 <= i <= n`.
    pub fn a_at(&self, i: usize) -> u32 {
        self.a[i - 1]
    }

    /// `k = s_1 + ... + s_{n-1}`.
    pub fn k(&self) -> u64 {
        self.s.iter().map(|&v| u64::from(v)).sum()
    }

    /// Diagrammatic norm `n - 1 + 2k`.
    pub fn norm(&self) -> u64 {
        self.n() as u64 - 1 + 2 * self.k()
    }

    pub fn s_vector(&self) -> SVector {
        SVector::new(self.s[1..self.n()].to_vec())
    }

    /// The interleaved tuple `(s_0, a_1, s_1, ..., a_n, s_n)`.
    pub fn to_raw(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(2 * self.n() + 1);
        out.push(self.s[0]);
        for (a, s) in self.a.iter().zip(&self.s[1..]) {
            out.push(*a);
            out.push(*s);
        }
        out
    }

    /// Horizontal symmetry: the tuple read backwards.
    pub fn sym_h(&self) -> Self {
        let mut s = self.s.clone();
        let mut a = self.a.clone();
        s.reverse();
        a.reverse();
        Self { s, a }
    }

    /// Vertical symmetry: each `a_i` reflected inside its admissible range.
    pub fn sym_v(&self) -> Self {
        let a = (1..=self.n())
            .map(|i| a_max(self.s[i - 1], self.s[i]) - self.a[i - 1])
            .collect();
        Self { s: self.s.clone(), a }
    }

    /// Central symmetry, `sym_h` composed with `sym_v`.
    pub fn sym_c(&self) -> Self {
        self.sym_v().sym_h()
    }
}

impl fmt::Display for VirtualCoordinates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (idx, v) in self.to_raw().iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Parses a parenthesised, comma-separated list such as `"(0,0,2,3,1,0,0)"`.
/// Whitespace is ignored; the strand count is inferred from the length.
impl FromStr for VirtualCoordinates {
    type Err = CoordError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let parse_err = |reason: &str| CoordError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| parse_err("expected parentheses around the tuple"))?;
        if inner.is_empty() {
            return Err(parse_err("empty tuple"));
        }
        let raw = inner
            .split(',')
            .map(|tok| tok.parse::<i64>().map_err(|e| parse_err(&format!("{tok:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if raw.len() % 2 == 0 {
            return Err(parse_err("tuple length must be odd (2n + 1)"));
        }
        Self::validate((raw.len() - 1) / 2, &raw)
    }
}

/// The interior half-counts `(s_1, ..., s_{n-1})` of a tuple; the unit of
/// work of the census.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SVector {
    s: Vec<u32>,
    k: u64,
}

impl SVector {
    pub fn new(interior: Vec<u32>) -> Self {
        let k = interior.iter().map(|&v| u64::from(v)).sum();
        Self { s: interior, k }
    }

    /// Strand count `n` (one more than the number of interior lines).
    pub fn n(&self) -> usize {
        self.s.len() + 1
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn interior(&self) -> &[u32] {
        &self.s
    }

    /// `(0, s_1, ..., s_{n-1}, 0)`.
    pub fn full(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.s.len() + 2);
        out.push(0);
        out.extend_from_slice(&self.s);
        out.push(0);
        out
    }

    /// Per-zone upper bounds `a_max(s_{i-1}, s_i)`.
    pub fn a_bounds(&self) -> Vec<u32> {
        let full = self.full();
        full.windows(2).map(|w| a_max(w[0], w[1])).collect()
    }

    /// Number of admissible a-tuples (product of the range sizes).
    pub fn a_tuple_count(&self) -> u128 {
        self.a_bounds().iter().map(|&m| u128::from(m) + 1).product()
    }

    pub fn reversed(&self) -> Self {
        let mut s = self.s.clone();
        s.reverse();
        Self { s, k: self.k }
    }

    pub fn is_palindrome(&self) -> bool {
        self.s.iter().eq(self.s.iter().rev())
    }
}

/// All compositions of `k` into `n - 1` non-negative parts, in
/// lexicographic order of `(s_1, ..., s_{n-1})`.
///
/// For `n = 1` there are no interior lines: a single empty vector is yielded
/// when `k = 0` and nothing otherwise.
pub fn enumerate_s_vectors(n: usize, k: u32) -> SVectorIter {
    assert!(n >= 1, "strand count must be at least 1");
    let parts = n - 1;
    let first = if parts == 0 {
        (k == 0).then(Vec::new)
    } else {
        let mut v = vec![0; parts];
        v[parts - 1] = k;
        Some(v)
    };
    SVectorIter { next: first }
}

#[derive(Debug, Clone)]
pub struct SVectorIter {
    next: Option<Vec<u32>>,
}

impl Iterator for SVectorIter {
    type Item = SVector;

    fn next(&mut self) -> Option<SVector> {
        let current = self.next.take()?;
        // Successor: find the rightmost non-last position p with a positive
        // tail; bump it and push the remaining tail mass to the end.
        let len = current.len();
        if len >= 2 {
            let mut succ = current.clone();
            let mut tail: u32 = succ[len - 1];
            let mut p = len - 1;
            while p > 0 {
                p -= 1;
                if tail > 0 {
                    succ[p] += 1;
                    tail -= 1;
                    for x in succ.iter_mut().skip(p + 1) {
                        *x = 0;
                    }
                    succ[len - 1] = tail;
                    self.next = Some(succ);
                    break;
                }
                tail += succ[p];
            }
        }
        Some(SVector::new(current))
    }
}

/// Every virtual tuple with the given s-vector, in lexicographic order of
/// `(a_1, ..., a_n)`.
pub fn enumerate_a_tuples(sv: &SVector) -> ATupleIter {
    let s = sv.full();
    let bounds = sv.a_bounds();
    let a = vec![0; bounds.len()];
    ATupleIter { s, bounds, next: Some(a) }
}

#[derive(Debug, Clone)]
pub struct ATupleIter {
    s: Vec<u32>,
    bounds: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for ATupleIter {
    type Item = VirtualCoordinates;

    fn next(&mut self) -> Option<VirtualCoordinates> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if odometer_step(&mut succ, &self.bounds).is_some() {
            self.next = Some(succ);
        }
        Some(VirtualCoordinates { s: self.s.clone(), a: current })
    }
}

/// Advances `digits` as a mixed-radix counter (last digit fastest) bounded
/// inclusively by `bounds`. Returns the index of the leftmost digit that
/// changed, or `None` after the last value (the digits are then all zero).
#[inline]
pub(crate) fn odometer_step(digits: &mut [u32], bounds: &[u32]) -> Option<usize> {
    let mut i = digits.len();
    while i > 0 {
        i -= 1;
        if digits[i] < bounds[i] {
            digits[i] += 1;
            return Some(i);
        }
        digits[i] = 0;
    }
    None
}
