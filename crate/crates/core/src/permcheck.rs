//! Translations and translated cuts of `Z_n`, and the actuality criteria
//! they give for three-strand coordinates.
//!
//! For `1 <= k < l`, the classes of a closed-by-above diagram with
//! coordinates `(0, 1, k, a_2, l, a_3, 0)` are in bijection with the orbits
//! of a permutation `theta` of `Z_{l+1}`, which is always a translation or a
//! translated cut. Both families have a gcd criterion for being a single
//! cycle, which turns actuality into arithmetic.

use thiserror::Error;

use crate::coords::a_max;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("translation T_{{{n},{a}}} needs 0 <= a <= n")]
    Translation { n: usize, a: usize },
    #[error("translated cut TCut_{{{n},{a},{b},{c}}} needs a + b + c <= n")]
    Cut { n: usize, a: usize, b: usize, c: usize },
    #[error("invalid regime k = {k}, l = {l}, a2 = {a2}, a3 = {a3}: {reason}")]
    Regime { k: u32, l: u32, a2: u32, a3: u32, reason: &'static str },
    #[error("a_{index} = {value} is outside 0..={max}")]
    ARange { index: usize, value: u32, max: u32 },
}

/// Greatest common divisor with `gcd(a, b) = gcd(|a|, |b|)` and
/// `gcd(0, b) = |b|`.
pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

fn coprime(a: i64, b: i64) -> bool {
    gcd(a, b) == 1
}

/// `Cut_{n,a,b,c}`: swaps the consecutive blocks `a..a+b` and
/// `a+b..a+b+c`, fixing everything else.
pub fn cut(n: usize, a: usize, b: usize, c: usize, u: usize) -> usize {
    debug_assert!(u < n && a + b + c <= n);
    if u < a || u >= a + b + c {
        u
    } else if u < a + b {
        u + c
    } else {
        u - b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PermSpec {
    /// `T_{n,a} : u -> u - a (mod n)`.
    Translation { n: usize, a: usize },
    /// `TCut_{n,a,b,c} = T_{n,1} . Cut_{n,a,b,c}`.
    TranslatedCut { n: usize, a: usize, b: usize, c: usize },
}

impl PermSpec {
    pub fn translation(n: usize, a: usize) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroModulus);
        }
        if a > n {
            return Err(PermError::Translation { n, a });
        }
        Ok(Self::Translation { n, a })
    }

    pub fn translated_cut(n: usize, a: usize, b: usize, c: usize) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::ZeroModulus);
        }
        if a + b + c > n {
            return Err(PermError::Cut { n, a, b, c });
        }
        Ok(Self::TranslatedCut { n, a, b, c })
    }

    pub fn modulus(&self) -> usize {
        match *self {
            Self::Translation { n, .. } | Self::TranslatedCut { n, .. } => n,
        }
    }

    /// Image of the residue `u`, `0 <= u < n`.
    pub fn apply(&self, u: usize) -> usize {
        match *self {
            Self::Translation { n, a } => (u + n - a % n) % n,
            Self::TranslatedCut { n, a, b, c } => (cut(n, a, b, c, u) + n - 1) % n,
        }
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::new((0..self.modulus()).map(|u| self.apply(u)).collect())
    }

    /// Single-cycle test through the gcd criteria, without materialising the
    /// permutation.
    pub fn is_cyclic(&self) -> bool {
        match *self {
            Self::Translation { n, a } => is_cyclic_translation(n, a),
            Self::TranslatedCut { n, a, b, c } => is_cyclic_translated_cut(n, a, b, c),
        }
    }
}

/// A permutation of `0..len` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut seen = vec![false; images.len()];
            images.iter().all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
        });
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, u: usize) -> usize {
        self.images[u]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Number of cycles, by walking each one.
    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = 0;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut u = start;
            while !seen[u] {
                seen[u] = true;
                u = self.images[u];
            }
        }
        cycles
    }

    /// Sorted cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.images.len()];
        let mut lengths = Vec::new();
        for start in 0..self.images.len() {
            let mut len = 0;
            let mut u = start;
            while !seen[u] {
                seen[u] = true;
                u = self.images[u];
                len += 1;
            }
            if len > 0 {
                lengths.push(len);
            }
        }
        lengths.sort_unstable();
        lengths
    }
}

/// Number of orbits of `p`, counted on the explicit permutation.
pub fn orbit_count(p: &PermSpec) -> usize {
    p.to_permutation().cycle_count()
}

/// `T_{n,a}` is a single cycle iff `gcd(a, n) = 1`.
pub fn is_cyclic_translation(n: usize, a: usize) -> bool {
    coprime(a as i64, n as i64)
}

/// `TCut_{n,a,b,c}` is a single cycle iff `gcd(c - 1, b + 1) = 1`.
pub fn is_cyclic_translated_cut(_n: usize, _a: usize, b: usize, c: usize) -> bool {
    coprime(c as i64 - 1, b as i64 + 1)
}

/// Parameters of the `a_1 = 1` three-strand case with `1 <= k < l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct B3Regime {
    k: u32,
    l: u32,
    a2: u32,
    a3: u32,
}

impl B3Regime {
    pub fn new(k: u32, l: u32, a2: u32, a3: u32) -> Result<Self, PermError> {
        let err = |reason| PermError::Regime { k, l, a2, a3, reason };
        if k < 1 {
            return Err(err("k must be at least 1"));
        }
        if l <= k {
            return Err(err("l must exceed k"));
        }
        if a2 > 2 * k + 1 {
            return Err(err("a2 must be at most 2k + 1"));
        }
        if a3 > 1 {
            return Err(err("a3 must be 0 or 1"));
        }
        Ok(Self { k, l, a2, a3 })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn a2(&self) -> u32 {
        self.a2
    }

    pub fn a3(&self) -> u32 {
        self.a3
    }

    /// `m = l - k >= 1`.
    pub fn m(&self) -> u32 {
        self.l - self.k
    }

    /// `floor(a2 / 2)`.
    pub fn alpha_floor(&self) -> u32 {
        self.a2 / 2
    }

    /// `ceil(a2 / 2)`.
    pub fn alpha_ceil(&self) -> u32 {
        self.a2.div_ceil(2)
    }
}

/// The orbit map of a [`B3Regime`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theta {
    Perm(PermSpec),
    /// `a2 > 0` and `a3 = 1`: `0` is a fixed point of a permutation of
    /// `Z_{modulus}` with `modulus >= 2`, so it is never cyclic.
    FixesZero { modulus: usize },
}

impl Theta {
    pub fn is_cyclic(&self) -> bool {
        match self {
            Self::Perm(p) => p.is_cyclic(),
            Self::FixesZero { .. } => false,
        }
    }

    /// Cyclicity decided by walking the explicit permutation.
    pub fn is_cyclic_by_orbits(&self) -> bool {
        match self {
            Self::Perm(p) => orbit_count(p) == 1,
            Self::FixesZero { .. } => false,
        }
    }
}

pub fn theta(r: &B3Regime) -> Theta {
    let (k, l, a2, a3) = (r.k as usize, r.l as usize, r.a2 as usize, r.a3 as usize);
    let m = l - k;
    let n = l + 1;
    let perm = if a2 == 0 {
        PermSpec::Translation { n, a: m + 1 - a3 }
    } else if a3 == 1 {
        return Theta::FixesZero { modulus: n };
    } else if a2 <= k + 1 {
        PermSpec::TranslatedCut { n, a: r.alpha_ceil() as usize, b: m, c: k + 1 - a2 }
    } else {
        PermSpec::TranslatedCut { n, a: k + 1 - r.alpha_floor() as usize, b: a2 - k - 1, c: m }
    };
    debug_assert!(match perm {
        PermSpec::Translation { n, a } => a <= n,
        PermSpec::TranslatedCut { n, a, b, c } => a + b + c <= n,
    });
    Theta::Perm(perm)
}

/// The four gcd criteria for `(0, 1, k, a2, l, a3, 0)` with `1 <= k < l`.
fn regime_actual(k: i64, m: i64, a2: i64, a3: i64) -> bool {
    match (a2, a3) {
        (0, 0) => coprime(k, m + 1),
        (0, _) => coprime(k + 1, m),
        (_, 1) => false,
        _ if a2 <= k + 1 => coprime(k - a2, m + 1),
        _ => coprime(a2 - k, m - 1),
    }
}

/// Closed-form actuality of the three-strand tuple `(0, a1, k, a2, l, a3, 0)`.
pub fn b3_actual(k: u32, l: u32, a1: u32, a2: u32, a3: u32) -> Result<bool, PermError> {
    for (index, value, max) in [(1, a1, a_max(0, k)), (2, a2, a_max(k, l)), (3, a3, a_max(l, 0))] {
        if value > max {
            return Err(PermError::ARange { index, value, max });
        }
    }
    Ok(b3_actual_unchecked(k, l, a1, a2, a3))
}

fn b3_actual_unchecked(k: u32, l: u32, a1: u32, a2: u32, a3: u32) -> bool {
    if k > l {
        // reversal of the tuple
        return b3_actual_unchecked(l, k, a3, a2, a1);
    }
    if l == 0 {
        return true;
    }
    if k == 0 {
        // the first zone collapses onto the two-strand case (0, a2, l, a3, 0)
        return a2 + a3 == 1;
    }
    if k == l {
        return a1 + a3 == 1;
    }
    let (k64, m) = (i64::from(k), i64::from(l - k));
    if a1 == 1 {
        regime_actual(k64, m, i64::from(a2), i64::from(a3))
    } else {
        // vertical reflection sends a1 = 0 to a1 = 1
        regime_actual(k64, m, i64::from(2 * k + 1 - a2), i64::from(1 - a3))
    }
}

/// `C_{k,l}`: number of `(a1, a2, a3)` making `(0, a1, k, a2, l, a3, 0)`
/// actual.
pub fn c_pair(k: u32, l: u32) -> u64 {
    let (k, l) = (u64::from(k.min(l)), u64::from(k.max(l)));
    if l == 0 {
        return 1;
    }
    if k == 0 {
        return 2;
    }
    if k == l {
        return 2 * (2 * k + 1);
    }
    let m = (l - k) as i64;
    let ones = |range: std::ops::RangeInclusive<i64>, other: i64| range.filter(|&a| coprime(a, other)).count() as u64;
    let half = ones(1..=k as i64, m + 1) + u64::from(coprime(k as i64 + 1, m)) + ones(1..=k as i64 + 1, m - 1);
    2 * half
}
