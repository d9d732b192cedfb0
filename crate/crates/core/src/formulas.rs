//! Exact binomial formulas for cutset widths.
//!
//! All arithmetic is arbitrary precision. `C(n, k) = 0` whenever `k < 0` or
//! `k > n`, so `Δ_n(0) = C(n, 0) - C(n, -1) = 1`.

use std::io;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};

pub fn binomial(n: i64, k: i64) -> Result<BigUint> {
    if n < 0 {
        return domain(format!("binomial needs n >= 0, got {n}"));
    }
    if k < 0 || k > n {
        return Ok(BigUint::zero());
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

fn binom_signed(n: i64, k: i64) -> Result<BigInt> {
    binomial(n, k).map(BigInt::from)
}

/// `Δ_n(k) = C(n, k) - C(n, k - 1)`.
pub fn delta(n: i64, k: i64) -> Result<BigInt> {
    Ok(binom_signed(n, k)? - binom_signed(n, k - 1)?)
}

fn check_standard(n: u64, m: u64, l: u64) -> Result<()> {
    if !(m <= l && l.checked_add(m).is_some_and(|s| s <= n)) {
        return domain(format!("need 0 <= m <= l <= n - m, got n={n} m={m} l={l}"));
    }
    Ok(())
}

fn to_unsigned(x: BigInt) -> Result<BigUint> {
    x.to_biguint()
        .ok_or_else(|| Error::Domain(format!("formula evaluated to a negative value {x}")))
}

/// `Σ_{j>=0} Δ_n(m - jc)` with `c = l - m + 1`, over the `⌊m/c⌋ + 1` terms
/// whose argument is non-negative.
pub fn conjecture_h_value(n: u64, m: u64, l: u64) -> Result<BigUint> {
    check_standard(n, m, l)?;
    let c = (l - m + 1) as i64;
    let (n, m) = (n as i64, m as i64);
    let mut sum = BigInt::zero();
    let mut k = m;
    while k >= 0 {
        sum += delta(n, k)?;
        k -= c;
    }
    to_unsigned(sum)
}

/// Known exact values of `g_n(m, l)`:
/// `C(n, m)` for `l = m`, `C(n-1, m)` for `l = m + 1` (`n >= m + 1`) and
/// `Σ_{j=0}^{m} C(n-2j-2, m-j)` for `l = m + 2` (`n >= 2m + 2`).
pub fn g_exact_value(n: u64, m: u64, l: u64) -> Result<Option<BigUint>> {
    if !(m <= l && l <= n) {
        return domain(format!("need 0 <= m <= l <= n, got n={n} m={m} l={l}"));
    }
    let (ni, mi) = (n as i64, m as i64);
    let value = match l - m {
        0 => Some(binomial(ni, mi)?),
        1 if n > m => Some(binomial(ni - 1, mi)?),
        2 if n >= 2 * m + 2 => Some(fourcolor_sum(ni, mi)?),
        _ => None,
    };
    Ok(value)
}

fn fourcolor_sum(n: i64, m: i64) -> Result<BigUint> {
    (0..=m).try_fold(BigUint::zero(), |acc, j| Ok(acc + binomial(n - 2 * j - 2, m - j)?))
}

/// `C(n-1, m) - C(n-1, m-1)`, the conjectured value of `g_n(m, n - m)`.
pub fn conjecture2_symmetric_value(n: u64, m: u64) -> Result<BigUint> {
    if n < 1 || 2 * m > n {
        return domain(format!("need 0 <= m <= n - m and n >= 1, got n={n} m={m}"));
    }
    let (n, m) = (n as i64, m as i64);
    to_unsigned(binom_signed(n - 1, m)? - binom_signed(n - 1, m - 1)?)
}

/// The four binomial identity families behind the explicit constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `Σ_j Δ_n(m - j) = C(n, m)`, for `n >= m`.
    DeltaStep1,
    /// `Σ_j Δ_n(m - 2j) = C(n-1, m)`, for `n >= m + 1`.
    DeltaStep2,
    /// `Σ_j Δ_n(m - 3j) = Σ_{j=0}^{m} C(n-2j-2, m-j)`, for `n >= 2m + 2`.
    DeltaStep3,
    /// `Σ_{j=0}^{m} (C(2m, j) - C(2m, j-1)) C(n-2m, m-j) = C(n, m) - C(n, m-1)`,
    /// for `n >= 2m`.
    ProductLift,
}

impl Identity {
    pub const ALL: [Identity; 4] = [
        Identity::DeltaStep1,
        Identity::DeltaStep2,
        Identity::DeltaStep3,
        Identity::ProductLift,
    ];

    pub fn applies(self, n: u64, m: u64) -> bool {
        match self {
            Identity::DeltaStep1 => n >= m,
            Identity::DeltaStep2 => n > m,
            Identity::DeltaStep3 => n >= 2 * m + 2,
            Identity::ProductLift => n >= 2 * m,
        }
    }

    /// Left and right side, each evaluated term by term.
    pub fn sides(self, n: u64, m: u64) -> Result<(BigInt, BigInt)> {
        let (n, m) = (n as i64, m as i64);
        let strided = |stride: i64| -> Result<BigInt> {
            let mut sum = BigInt::zero();
            let mut k = m;
            while k >= 0 {
                sum += delta(n, k)?;
                k -= stride;
            }
            Ok(sum)
        };
        Ok(match self {
            Identity::DeltaStep1 => (strided(1)?, binom_signed(n, m)?),
            Identity::DeltaStep2 => (strided(2)?, binom_signed(n - 1, m)?),
            Identity::DeltaStep3 => (strided(3)?, BigInt::from(fourcolor_sum(n, m)?)),
            Identity::ProductLift => {
                let mut lhs = BigInt::zero();
                for j in 0..=m {
                    lhs += delta(2 * m, j)? * binom_signed(n - 2 * m, m - j)?;
                }
                (lhs, delta(n, m)?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub n: u64,
    pub m: u64,
    #[serde(serialize_with = "display")]
    pub lhs: BigInt,
    #[serde(serialize_with = "display")]
    pub rhs: BigInt,
    pub pass: bool,
}

fn display<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Every identity at every `(n, m)` with `n <= max_n`, `m <= max_m` inside
/// the identity's range.
pub fn check_identities(max_n: u64, max_m: u64) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    for identity in Identity::ALL {
        for m in 0..=max_m {
            for n in 0..=max_n {
                if !identity.applies(n, m) {
                    continue;
                }
                let (lhs, rhs) = identity.sides(n, m)?;
                let pass = lhs == rhs;
                out.push(IdentityCheck {
                    identity,
                    n,
                    m,
                    lhs,
                    rhs,
                    pass,
                });
            }
        }
    }
    Ok(out)
}

/// CSV with header `identity,n,m,lhs,rhs,pass`.
pub fn write_identities_csv<W: io::Write>(writer: W, checks: &[IdentityCheck]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    for check in checks {
        csv.serialize(check).map_err(|e| Error::Format(e.to_string()))?;
    }
    csv.flush().map_err(|e| Error::Format(e.to_string()))
}
