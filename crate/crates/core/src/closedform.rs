//! Euler's totient and the closed forms for two and three strands.
//!
//! Series are truncated power series with exact `i64` coefficients; every
//! division is by a polynomial with constant term `1` and is carried out as
//! a Cauchy-product recurrence with overflow checks.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::permcheck::c_pair;

/// Largest sieve accepted by [`totient_sieve`].
pub const MAX_SIEVE: usize = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosedFormError {
    #[error("sieve capacity {requested} is outside 1..={limit}")]
    Capacity { requested: usize, limit: usize },
    #[error("coefficient overflow in series {label} at index {index}")]
    Overflow { label: SeriesLabel, index: usize },
    #[error("f series needs nmax >= 3, got {0}")]
    FRange(usize),
}

/// `phi(1), ..., phi(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotientTable {
    // values[0] is unused and kept at 0
    values: Vec<u32>,
}

/// Linear sieve for Euler's totient up to `n` inclusive.
pub fn totient_sieve(n: usize) -> Result<TotientTable, ClosedFormError> {
    if n == 0 || n > MAX_SIEVE {
        return Err(ClosedFormError::Capacity { requested: n, limit: MAX_SIEVE });
    }
    let mut phi = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    phi[1] = 1;
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = (i - 1) as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let ip = i * p as usize;
            if ip > n {
                break;
            }
            if i % p as usize == 0 {
                phi[ip] = phi[i] * p;
                break;
            }
            phi[ip] = phi[i] * (p - 1);
        }
    }
    Ok(TotientTable { values: phi })
}

impl TotientTable {
    pub fn capacity(&self) -> usize {
        self.values.len() - 1
    }

    /// `phi(m)` for `1 <= m <= capacity`.
    pub fn phi(&self, m: usize) -> u64 {
        assert!(m >= 1 && m <= self.capacity(), "phi({m}) outside the sieve");
        u64::from(self.values[m])
    }

    /// `sum_{m <= n} phi(m)`.
    pub fn summatory(&self, n: usize) -> u64 {
        (1..=n).map(|m| self.phi(m)).sum()
    }

    /// `phi_hat(m) = phi(m) + phi(m - 2) + ...` down to `phi(1)` or `phi(2)`,
    /// for `0 <= m <= capacity` (`phi_hat(0) = 0`).
    pub fn phi_hat_table(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.values.len()];
        for m in 1..out.len() {
            out[m] = self.phi(m) + if m >= 2 { out[m - 2] } else { 0 };
        }
        out
    }

    /// `g_{3,k}` from the totient formula. Needs `capacity >= k + 2`.
    pub fn g3_totient(&self, k: u64) -> u64 {
        if k == 0 {
            return 1;
        }
        let k = k as usize;
        let even = u64::from(k.is_multiple_of(2));
        let inner: u64 = (1..=k / 2).map(|i| self.phi(k + 3 - 2 * i)).sum();
        2 * (self.phi(k + 2) - even + 2 * inner)
    }

    /// `gamma_i` of the parity expansion. Needs `capacity >= i + 2`.
    pub fn gamma(&self, i: u64) -> i64 {
        let ind = |c: bool| i64::from(c);
        let phi = |m: u64| self.phi(m as usize) as i64;
        let mut g = ind(i == 0) - 3 * ind(i == 2);
        if i >= 1 {
            g += 2 * phi(i + 2);
        }
        if i >= 2 {
            g += 4 * phi(i + 1);
        }
        if i >= 3 {
            g -= 2 * phi(i);
        }
        g
    }

    /// `g_{3,k} = gamma_k + gamma_{k-2} + ...`. Needs `capacity >= k + 2`.
    pub fn g3_via_gamma(&self, k: u64) -> u64 {
        let total: i64 = (0..=k / 2).map(|i| self.gamma(k - 2 * i)).sum();
        u64::try_from(total).expect("gamma partial sums are non-negative")
    }
}

/// `g_{2,k}`.
pub fn g2(k: u64) -> u64 {
    if k == 0 {
        1
    } else {
        2
    }
}

fn sieve_for(k: u64) -> TotientTable {
    totient_sieve(k as usize + 3).expect("sieve size within limit")
}

/// `g_{3,k}` from the totient formula.
pub fn g3_totient(k: u64) -> u64 {
    sieve_for(k).g3_totient(k)
}

/// `g_{3,k}` as the antidiagonal sum of `C_{k',l'}`.
pub fn g3_via_c(k: u64) -> u64 {
    let k = u32::try_from(k).expect("k fits in u32");
    (0..=k).map(|i| c_pair(i, k - i)).sum()
}

/// `g_{3,k}` through the `gamma` expansion.
pub fn g3_via_gamma(k: u64) -> u64 {
    sieve_for(k).g3_via_gamma(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SeriesLabel {
    G2,
    G3,
    B2,
    B3,
    /// Twice the series `F(z) = sum phi(n) z^n / 2`.
    F2,
}

impl fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::G2 => "G2",
            Self::G3 => "G3",
            Self::B2 => "B2",
            Self::B3 => "B3",
            Self::F2 => "2F",
        };
        f.write_str(s)
    }
}

/// Coefficients `c_0, ..., c_kmax` of a generating function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesTable {
    pub label: SeriesLabel,
    pub coefficients: Vec<i64>,
}

impl SeriesTable {
    pub fn kmax(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Coefficient of `z^i`.
    pub fn coeff(&self, i: usize) -> i64 {
        self.coefficients[i]
    }
}

/// Truncated power-series arithmetic on exact coefficients.
struct Series {
    label: SeriesLabel,
    len: usize,
}

impl Series {
    fn overflow(&self, index: usize) -> ClosedFormError {
        ClosedFormError::Overflow { label: self.label, index }
    }

    fn poly(&self, terms: &[(usize, i64)]) -> Vec<i64> {
        let mut v = vec![0; self.len];
        for &(d, c) in terms {
            if d < self.len {
                v[d] += c;
            }
        }
        v
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>, ClosedFormError> {
        let mut out = vec![0i64; self.len];
        for (i, &x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
            for (j, &y) in b.iter().enumerate().take(self.len - i) {
                let t = x.checked_mul(y).ok_or(self.overflow(i + j))?;
                out[i + j] = out[i + j].checked_add(t).ok_or(self.overflow(i + j))?;
            }
        }
        Ok(out)
    }

    /// `a / d` where `d[0] = 1`: `q_i = a_i - sum_{j >= 1} d_j q_{i-j}`.
    fn div(&self, a: &[i64], d: &[i64]) -> Result<Vec<i64>, ClosedFormError> {
        assert_eq!(d[0], 1, "divisor must have constant term 1");
        let mut q = vec![0i64; self.len];
        for i in 0..self.len {
            let mut acc = a[i];
            for (j, &dj) in d.iter().enumerate().take(i + 1).skip(1).filter(|(_, x)| **x != 0) {
                let t = dj.checked_mul(q[i - j]).ok_or(self.overflow(i))?;
                acc = acc.checked_sub(t).ok_or(self.overflow(i))?;
            }
            q[i] = acc;
        }
        Ok(q)
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Result<Vec<i64>, ClosedFormError> {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| x.checked_add(*y).ok_or(self.overflow(i)))
            .collect()
    }

    fn scale(&self, a: &[i64], c: i64) -> Result<Vec<i64>, ClosedFormError> {
        a.iter().enumerate().map(|(i, x)| x.checked_mul(c).ok_or(self.overflow(i))).collect()
    }
}

/// Coefficients of `label` up to `z^kmax`, by exact series arithmetic on
/// the rational expressions.
pub fn series(label: SeriesLabel, kmax: usize) -> Result<SeriesTable, ClosedFormError> {
    let s = Series { label, len: kmax + 1 };
    let coefficients = match label {
        SeriesLabel::G2 => s.div(&s.poly(&[(0, 1), (1, 1)]), &s.poly(&[(0, 1), (1, -1)]))?,
        SeriesLabel::B2 => s.div(&s.poly(&[(1, 1), (3, 1)]), &s.poly(&[(0, 1), (2, -1)]))?,
        SeriesLabel::G3 => {
            // sum_{n >= 3} phi(n) z^n, divided by z^2
            let sieve = totient_sieve(kmax + 3)?;
            let terms: Vec<(usize, i64)> = (3..=kmax + 2).map(|n| (n - 2, sieve.phi(n) as i64)).collect();
            let p = s.poly(&terms);
            let num = s.mul(&s.poly(&[(0, 1), (1, 2), (2, -1)]), &p)?;
            let first = s.scale(&s.div(&num, &s.poly(&[(0, 1), (2, -1)]))?, 2)?;
            let second = s.div(&s.poly(&[(0, 1), (2, -3)]), &s.poly(&[(0, 1), (2, -1)]))?;
            s.add(&first, &second)?
        }
        SeriesLabel::B3 => {
            let sieve = totient_sieve(kmax / 2 + 3)?;
            let terms: Vec<(usize, i64)> =
                (3..=kmax / 2 + 1).map(|n| (2 * n - 2, sieve.phi(n) as i64)).collect();
            let p = s.poly(&terms);
            let num = s.mul(&s.poly(&[(0, 1), (2, 2), (4, -1)]), &p)?;
            let quartic = s.poly(&[(0, 1), (4, -1)]);
            let first = s.scale(&s.div(&num, &quartic)?, 2)?;
            let second = s.div(&s.poly(&[(2, 1), (6, -3)]), &quartic)?;
            s.add(&first, &second)?
        }
        SeriesLabel::F2 => return f_half_totient(kmax.max(3)).map(|mut t| {
            t.coefficients.truncate(kmax + 1);
            t
        }),
    };
    Ok(SeriesTable { label, coefficients })
}

/// Twice the coefficients of `F(z)`: `2 f_n = phi(n)` for `3 <= n <= nmax`,
/// zero below.
pub fn f_half_totient(nmax: usize) -> Result<SeriesTable, ClosedFormError> {
    if nmax < 3 {
        return Err(ClosedFormError::FRange(nmax));
    }
    let sieve = totient_sieve(nmax)?;
    let coefficients = (0..=nmax).map(|n| if n >= 3 { sieve.phi(n) as i64 } else { 0 }).collect();
    Ok(SeriesTable { label: SeriesLabel::F2, coefficients })
}

/// Twice the number of coprime pairs `alpha, beta >= 1` with
/// `2 alpha + beta = n`, for `0 <= n <= nmax`.
pub fn f_coprime_pairs_doubled(nmax: usize) -> Vec<i64> {
    let mut out = vec![0i64; nmax + 1];
    for alpha in 1..=nmax / 2 {
        for beta in 1..=nmax - 2 * alpha {
            if crate::permcheck::gcd(alpha as i64, beta as i64) == 1 {
                out[2 * alpha + beta] += 2;
            }
        }
    }
    out
}
