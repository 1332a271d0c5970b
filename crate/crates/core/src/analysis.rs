//! Bounds on `g_{n,k}`, explicit actual coordinates for every s-vector,
//! and the normalised ratio series.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::census::{count_actual, count_table, CensusError, CensusOptions};
use crate::closedform::{g2, totient_sieve};
use crate::coords::{SVector, VirtualCoordinates};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("the upper bound needs n >= 2, got {0}")]
    UpperRange(usize),
    #[error("closed-form ratios exist only for n = 2 and n = 3, got {0}")]
    SourceMismatch(usize),
    #[error("residue modulus must be positive")]
    ZeroRho,
    #[error(transparent)]
    Census(#[from] CensusError),
}

fn binomial(top: u64, bottom: u64) -> BigUint {
    if bottom > top {
        return BigUint::zero();
    }
    let bottom = bottom.min(top - bottom);
    let mut acc = BigUint::one();
    for i in 0..bottom {
        acc *= top - i;
        acc /= i + 1;
    }
    acc
}

/// `binom(k + n - 2, n - 2)`, zero for `n = 1`.
pub fn lower_bound(n: usize, k: u32) -> BigUint {
    if n < 2 {
        return BigUint::zero();
    }
    let m = n as u64 - 2;
    binomial(u64::from(k) + m, m)
}

/// `2^n ((k + n - 1) / (n - 1))^(n - 2) binom(k + n - 2, n - 2)`, exact.
pub fn upper_bound(n: usize, k: u32) -> Result<BigRational, AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::UpperRange(n));
    }
    let e = n as u32 - 2;
    let num = (BigUint::from(1u8) << n) * BigUint::from(u64::from(k) + n as u64 - 1).pow(e) * lower_bound(n, k);
    let den = BigUint::from(n as u64 - 1).pow(e);
    Ok(BigRational::new(num.into(), den.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub k: u32,
    pub lower: BigUint,
    pub g: Option<u64>,
    pub upper: BigRational,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn new(n: usize, k: u32, g: Option<u64>) -> Result<Self, AnalysisError> {
        let lower = lower_bound(n, k);
        let upper = upper_bound(n, k)?;
        let verdict = match g {
            None => Verdict::Unchecked,
            Some(g) => {
                let gb = BigUint::from(g);
                let gr = BigRational::from_integer(gb.clone().into());
                if lower <= gb && gr <= upper {
                    Verdict::Holds
                } else {
                    Verdict::Violated
                }
            }
        };
        Ok(Self { n, k, lower, g, upper, verdict })
    }
}

impl Serialize for BoundReport {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("BoundReport", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("lower", &self.lower.to_string())?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("upper", &self.upper.to_string())?;
        st.serialize_field("upper_approx", &self.upper.to_f64())?;
        st.serialize_field("verdict", &self.verdict)?;
        st.end()
    }
}

/// Bound reports for `k = 0..=kmax`, with census values if `census` is set.
pub fn bounds_table(
    n: usize,
    kmax: u32,
    census: Option<&CensusOptions>,
) -> Result<Vec<BoundReport>, AnalysisError> {
    let gs: Vec<Option<u64>> = match census {
        Some(opts) => count_table(n, kmax, opts)?.into_iter().map(|r| Some(r.g)).collect(),
        None => vec![None; kmax as usize + 1],
    };
    gs.into_iter().enumerate().map(|(k, g)| BoundReport::new(n, k as u32, g)).collect()
}

/// Explicit actual coordinates with s-vector `sv`: `a_i = s_{i-1}` when
/// `s_{i-1} <= s_i` and `a_i = s_i + 1` otherwise.
pub fn witness_a_for_s(sv: &SVector) -> VirtualCoordinates {
    let s = sv.full();
    let a = s.windows(2).map(|w| if w[0] <= w[1] { w[0] } else { w[1] + 1 }).collect();
    VirtualCoordinates::from_parts(s, a).expect("witness lies in the admissible range")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioSource {
    Census,
    #[serde(rename = "closedform")]
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioPoint {
    pub n: usize,
    pub k: u32,
    pub g: u64,
    /// `g / k^(2(n-2))`.
    pub ratio_k: f64,
    /// `g / (k+n)^(2(n-2))`.
    pub ratio_shift: f64,
    /// `k mod rho`.
    pub residue: u32,
    /// `pi^2 g / k^2`, three strands only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized: Option<f64>,
}

impl RatioPoint {
    pub fn new(n: usize, k: u32, g: u64, rho: u32) -> Self {
        let e = 2 * (n as i32 - 2);
        let kf = f64::from(k);
        Self {
            n,
            k,
            g,
            ratio_k: g as f64 / kf.powi(e),
            ratio_shift: g as f64 / (kf + n as f64).powi(e),
            residue: k % rho,
            normalized: (n == 3).then(|| PI * PI * g as f64 / (kf * kf)),
        }
    }
}

/// Residue modulus used to group ratio points: 6 for four strands, 2
/// otherwise (1 for fewer than three strands).
pub fn default_rho(n: usize) -> u32 {
    match n {
        4 => 6,
        3 | 5 => 2,
        _ => 1,
    }
}

/// Ratio points for `k = 1..=kmax`.
pub fn ratio_series(
    n: usize,
    kmax: u32,
    source: RatioSource,
    rho: Option<u32>,
    census: &CensusOptions,
) -> Result<Vec<RatioPoint>, AnalysisError> {
    let rho = rho.unwrap_or_else(|| default_rho(n));
    if rho == 0 {
        return Err(AnalysisError::ZeroRho);
    }
    let gs: Vec<u64> = match source {
        RatioSource::Census => count_table(n, kmax, census)?.into_iter().map(|r| r.g).collect(),
        RatioSource::ClosedForm => match n {
            2 => (0..=kmax).map(|k| g2(k.into())).collect(),
            3 => {
                let t = totient_sieve(kmax as usize + 3).expect("sieve size within limit");
                (0..=kmax).map(|k| t.g3_totient(k.into())).collect()
            }
            _ => return Err(AnalysisError::SourceMismatch(n)),
        },
    };
    Ok((1..=kmax).map(|k| RatioPoint::new(n, k, gs[k as usize], rho)).collect())
}

/// Single ratio point from the census.
pub fn census_ratio(n: usize, k: u32, census: &CensusOptions) -> Result<RatioPoint, AnalysisError> {
    let g = count_actual(n, k, census)?.g;
    Ok(RatioPoint::new(n, k, g, default_rho(n)))
}

/// CSV with header `n,k,g,ratio_k,ratio_shift,residue`.
pub fn ratios_to_csv(points: &[RatioPoint]) -> String {
    let mut out = String::from("n,k,g,ratio_k,ratio_shift,residue\n");
    for p in points {
        out.push_str(&format!("{},{},{},{},{},{}\n", p.n, p.k, p.g, p.ratio_k, p.ratio_shift, p.residue));
    }
    out
}
