//! Characteristic numbers of Lefschetz fibrations and the geography region.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorization::PositiveFactorization;
use crate::homology::HomologyClass;
use crate::meyer::signature_meyer;

/// Upper bound on `m` accepted by [`enumerate_region`].
pub const MAX_REGION_M: u64 = 10_000;

/// `e = 4 − 4g + ℓ`.
pub fn euler_characteristic(p: &PositiveFactorization) -> i64 {
    4 - 4 * p.genus() as i64 + p.len() as i64
}

/// Caller-supplied assertion that the monodromy is hyperelliptic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperellipticCertificate {
    pub reason: String,
}

impl HyperellipticCertificate {
    pub fn asserted(reason: impl Into<String>) -> Self {
        HyperellipticCertificate {
            reason: reason.into(),
        }
    }
}

/// Endo's formula with only nonseparating vanishing cycles:
/// `σ = −(g+1)/(2g+1) · n₀`.
pub fn signature_endo(p: &PositiveFactorization, _cert: &HyperellipticCertificate) -> Result<i64> {
    if let Some(c) = p.twists().iter().find(|c| c.class_mod2().is_zero()) {
        return Err(Error::precondition(format!(
            "vanishing cycle `{}` is separating; only nonseparating cycles are supported",
            c.label()
        )));
    }
    let g = p.genus() as i64;
    let sigma = Ratio::new(-(g + 1) * p.len() as i64, 2 * g + 1);
    if !sigma.is_integer() {
        return Err(Error::Certificate(format!(
            "Endo signature {sigma} is not an integer"
        )));
    }
    Ok(sigma.to_integer())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignatureMethod {
    EndoHyperelliptic,
    Meyer,
    BredFormula,
}

impl fmt::Display for SignatureMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignatureMethod::EndoHyperelliptic => "endo-hyperelliptic",
            SignatureMethod::Meyer => "meyer",
            SignatureMethod::BredFormula => "bred-formula",
        })
    }
}

#[derive(Debug, Clone)]
pub enum SignatureSource {
    EndoHyperelliptic(HyperellipticCertificate),
    Meyer,
    /// `σ = −8(g+1)` for a member of the bred family with `k` pencils.
    BredFamily { k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FibrationInvariants {
    pub euler: i64,
    pub signature: i64,
    pub signature_method: SignatureMethod,
    pub chi_h: i64,
    pub c1sq: i64,
}

impl FibrationInvariants {
    pub fn from_euler_signature(euler: i64, signature: i64, method: SignatureMethod) -> Result<Self> {
        if (euler + signature) % 4 != 0 {
            return Err(Error::Certificate(format!(
                "e + σ = {} is not divisible by 4",
                euler + signature
            )));
        }
        Ok(FibrationInvariants {
            euler,
            signature,
            signature_method: method,
            chi_h: (euler + signature) / 4,
            c1sq: 2 * euler + 3 * signature,
        })
    }

    pub fn point(&self) -> Option<GeographyPoint> {
        Some(GeographyPoint {
            m: u64::try_from(self.chi_h).ok()?,
            n: u64::try_from(self.c1sq).ok()?,
        })
    }
}

pub fn invariants_of(
    p: &PositiveFactorization,
    source: &SignatureSource,
) -> Result<FibrationInvariants> {
    let euler = euler_characteristic(p);
    let (signature, method) = match source {
        SignatureSource::EndoHyperelliptic(cert) => {
            (signature_endo(p, cert)?, SignatureMethod::EndoHyperelliptic)
        }
        SignatureSource::Meyer => (signature_meyer(p)?, SignatureMethod::Meyer),
        SignatureSource::BredFamily { k } => {
            let g = p.genus();
            let expected = 16 * g + 8 + 4 * *k as usize;
            if g < 5 || g % 2 == 0 || *k as usize > 2 * g + 2 || p.len() != expected {
                return Err(Error::precondition(format!(
                    "factorization (genus {g}, length {}) is not in the bred family with k = {k}",
                    p.len()
                )));
            }
            (-8 * (g as i64 + 1), SignatureMethod::BredFormula)
        }
    };
    FibrationInvariants::from_euler_signature(euler, signature, method)
}

/// A lattice point `(χ_h, c₁²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GeographyPoint {
    pub m: u64,
    pub n: u64,
}

impl GeographyPoint {
    pub fn new(m: u64, n: u64) -> Self {
        GeographyPoint { m, n }
    }
}

impl fmt::Display for GeographyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// `n ≡ 8m (mod 16)`, `n ≤ 8(m − 6)` and `3n ≤ 16m`.
pub fn is_admissible(pt: GeographyPoint) -> bool {
    let (m, n) = (pt.m as i128, pt.n as i128);
    (n - 8 * m).rem_euclid(16) == 0 && n <= 8 * (m - 6) && 3 * n <= 16 * m
}

/// The `(g, k)` with `χ_h = g + 1 + k`, `c₁² = 8k`, if it is in range.
pub fn realize(pt: GeographyPoint) -> Option<(usize, u32)> {
    if pt.n % 8 != 0 {
        return None;
    }
    let k = pt.n / 8;
    let g = pt.m.checked_sub(1 + k)?;
    if g < 5 || g % 2 == 0 || k > 2 * g + 2 {
        return None;
    }
    Some((usize::try_from(g).ok()?, u32::try_from(k).ok()?))
}

/// Admissible points with `m ≤ m_max`, ordered by `m` then `n`.
pub fn enumerate_region(m_max: u64) -> Result<Vec<GeographyPoint>> {
    if m_max > MAX_REGION_M {
        return Err(Error::precondition(format!(
            "m_max = {m_max} exceeds the limit {MAX_REGION_M}"
        )));
    }
    let mut out = Vec::new();
    for m in 6..=m_max {
        let top = (8 * (m - 6)).min(16 * m / 3);
        // n runs over the residue class of 8m mod 16
        let mut n = (8 * m) % 16;
        while n <= top {
            out.push(GeographyPoint { m, n });
            n += 16;
        }
    }
    Ok(out)
}
