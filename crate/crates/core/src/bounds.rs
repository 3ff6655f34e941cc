//! Counting bounds for unit equations and sparse-set intersections.
//!
//! Every bound is a product of explicit powers, so each is carried both
//! as a float log10 (always available) and as an exact arbitrary-precision
//! rational (computed when the value fits under a configurable bit cap).
//! The formulas are astronomically large but perfectly concrete; nothing
//! here is asymptotic.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Pow;

use crate::error::{Error, Result};

/// Largest exact value materialized by default: a generous 2^26 bits,
/// roughly 8 MiB per bound.
pub const DEFAULT_EXACT_BIT_CAP: u64 = 1 << 26;

/// Identifies which bound formula produced a value. The display form is
/// the identifier accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaId {
    /// Nondegenerate solutions of an n-term unit equation over a rank-r
    /// group.
    UnitEquation,
    /// Solution pairs of a two-sided power equation, no vanishing subsum.
    NondegeneratePair,
    /// Solution pairs of a two-sided power equation, degenerate case.
    DegeneratePair,
    /// Common values of two sparse terms with s and t stars.
    TermPair,
    /// Intersection of sparse sets automatic in independent bases.
    Intersection,
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaId::UnitEquation => "unit-eq",
            FormulaId::NondegeneratePair => "pair-nondeg",
            FormulaId::DegeneratePair => "pair-deg",
            FormulaId::TermPair => "term-pair",
            FormulaId::Intersection => "main",
        })
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FormulaId> {
        Ok(match s {
            "unit-eq" => FormulaId::UnitEquation,
            "pair-nondeg" => FormulaId::NondegeneratePair,
            "pair-deg" => FormulaId::DegeneratePair,
            "term-pair" => FormulaId::TermPair,
            "main" => FormulaId::Intersection,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown formula {other:?}; expected unit-eq, pair-nondeg, pair-deg, \
                     term-pair or main"
                )))
            }
        })
    }
}

/// An evaluated bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundValue {
    pub formula: FormulaId,
    /// The named inputs the formula was evaluated at.
    pub inputs: Vec<(&'static str, u64)>,
    /// log10 of the bound.
    pub log10: f64,
    /// The exact value when it fits under the bit cap.
    pub exact: Option<BigRational>,
}

/// Product of integer powers divided by a power of two, evaluated both in
/// logs and (under `cap_bits`) exactly.
fn power_product(
    formula: FormulaId,
    inputs: Vec<(&'static str, u64)>,
    factors: &[(u64, u128)],
    half_exponent: u64,
    cap_bits: u64,
) -> BoundValue {
    let log2: f64 = factors
        .iter()
        .map(|&(b, e)| e as f64 * (b as f64).log2())
        .sum::<f64>();
    let log10 = factors
        .iter()
        .map(|&(b, e)| e as f64 * (b as f64).log10())
        .sum::<f64>()
        - half_exponent as f64 * std::f64::consts::LOG10_2;
    let exact = if log2 <= cap_bits as f64 {
        // Reducing by gcd is quadratic in values this large, so the power
        // of two is cancelled symbolically: the numerator is built from
        // the odd parts of the bases and shifted by the surviving 2-adic
        // valuation, leaving a fraction that is reduced by construction.
        let two_adic: u64 = factors
            .iter()
            .map(|&(b, e)| b.trailing_zeros() as u64 * e as u64)
            .sum();
        let cancelled = two_adic.min(half_exponent);
        let odd: BigUint = factors
            .iter()
            .map(|&(b, e)| Pow::pow(&BigUint::from(b >> b.trailing_zeros()), e as u64))
            .product();
        let numer = odd << (two_adic - cancelled);
        let denom = BigUint::from(1u32) << (half_exponent - cancelled);
        Some(BigRational::new_raw(
            BigInt::from(numer),
            BigInt::from(denom),
        ))
    } else {
        None
    };
    BoundValue {
        formula,
        inputs,
        log10,
        exact,
    }
}

fn checked_pow5(u: u128) -> Result<u128> {
    u.checked_pow(5)
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))
}

fn checked_pow4(u: u128) -> Result<u128> {
    u.checked_pow(4)
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))
}

/// `(8n)^(4 n^4 (n + r + 1))`: the number of nondegenerate solutions of a
/// unit equation `a1 x1 + ... + an xn = 1` with the `x_i` drawn from a
/// rank-r subgroup of the nonzero complex numbers.
pub fn solution_count_bound(n: u64, r: u64) -> Result<BoundValue> {
    solution_count_bound_with_cap(n, r, DEFAULT_EXACT_BIT_CAP)
}

pub fn solution_count_bound_with_cap(n: u64, r: u64, cap_bits: u64) -> Result<BoundValue> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one term".into()));
    }
    let exp = 4u128
        .checked_mul(checked_pow4(n as u128)?)
        .and_then(|x| x.checked_mul(n as u128 + r as u128 + 1))
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))?;
    Ok(power_product(
        FormulaId::UnitEquation,
        vec![("n", n), ("r", r)],
        &[(8 * n, exp)],
        0,
        cap_bits,
    ))
}

/// `(8(n+m-1))^(10 (n+m)^5 - 4 (n+m-1)^4)`: solution pairs of
/// `c1 k^(a1) + ... + cn k^(an) = d1 l^(b1) + ... + dm l^(bm)` with no
/// vanishing subsum, for fixed nonzero coefficients and multiplicatively
/// independent k and l.
pub fn nondegenerate_pair_bound(n: u64, m: u64) -> Result<BoundValue> {
    nondegenerate_pair_bound_with_cap(n, m, DEFAULT_EXACT_BIT_CAP)
}

pub fn nondegenerate_pair_bound_with_cap(n: u64, m: u64, cap_bits: u64) -> Result<BoundValue> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(
            "need at least one term per side".into(),
        ));
    }
    let u = n as u128 + m as u128;
    let exp = 10u128
        .checked_mul(checked_pow5(u)?)
        .and_then(|x| x.checked_sub(4 * checked_pow4(u - 1).ok()?))
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))?;
    Ok(power_product(
        FormulaId::NondegeneratePair,
        vec![("n", n), ("m", m)],
        &[(8 * (n + m - 1), exp)],
        0,
        cap_bits,
    ))
}

/// `2^-(n+m) (8(n+m-1))^(10 (n+m)^5 - (n+m))`: the degenerate counterpart
/// of [`nondegenerate_pair_bound`], an exact rational.
pub fn degenerate_pair_bound(n: u64, m: u64) -> Result<BoundValue> {
    degenerate_pair_bound_with_cap(n, m, DEFAULT_EXACT_BIT_CAP)
}

pub fn degenerate_pair_bound_with_cap(n: u64, m: u64, cap_bits: u64) -> Result<BoundValue> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter(
            "need at least one term per side".into(),
        ));
    }
    let u = n as u128 + m as u128;
    let exp = 10u128
        .checked_mul(checked_pow5(u)?)
        .and_then(|x| x.checked_sub(u))
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))?;
    Ok(power_product(
        FormulaId::DegeneratePair,
        vec![("n", n), ("m", m)],
        &[(8 * (n + m - 1), exp)],
        n + m,
        cap_bits,
    ))
}

/// `(8(s+t+1))^(10 (s+t+2)^5 - (s+t+2))`: the number of common values of
/// two simple sparse terms with s and t stars over multiplicatively
/// independent bases, outside their joint degenerate families.
pub fn term_pair_bound(s: u64, t: u64) -> Result<BoundValue> {
    term_pair_bound_with_cap(s, t, DEFAULT_EXACT_BIT_CAP)
}

pub fn term_pair_bound_with_cap(s: u64, t: u64, cap_bits: u64) -> Result<BoundValue> {
    let u = s as u128 + t as u128 + 2;
    let exp = 10u128
        .checked_mul(checked_pow5(u)?)
        .and_then(|x| x.checked_sub(u))
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))?;
    Ok(power_product(
        FormulaId::TermPair,
        vec![("s", s), ("t", t)],
        &[(8 * (s + t + 1), exp)],
        0,
        cap_bits,
    ))
}

/// `k^(dq) l^(dq') (8(q+q'-1))^(10 d (q+q')^5)`: the number of members an
/// intersection of a sparse k-automatic set and a sparse l-automatic set
/// in d dimensions can have, given minimal canonical acceptors with q and
/// q' states and multiplicatively independent bases.
pub fn intersection_bound(k: u64, l: u64, d: u64, q: u64, qp: u64) -> Result<BoundValue> {
    intersection_bound_with_cap(k, l, d, q, qp, DEFAULT_EXACT_BIT_CAP)
}

pub fn intersection_bound_with_cap(
    k: u64,
    l: u64,
    d: u64,
    q: u64,
    qp: u64,
    cap_bits: u64,
) -> Result<BoundValue> {
    if k < 2 || l < 2 {
        return Err(Error::InvalidParameter("bases must be at least 2".into()));
    }
    if d == 0 || q == 0 || qp == 0 {
        return Err(Error::InvalidParameter(
            "dimension and state counts must be positive".into(),
        ));
    }
    if !multiplicatively_independent(k, l)? {
        return Err(Error::DependentBases { k, l });
    }
    let exp = 10u128
        .checked_mul(d as u128)
        .and_then(|x| x.checked_mul(checked_pow5(q as u128 + qp as u128).ok()?))
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))?;
    let dq = (d as u128)
        .checked_mul(q as u128)
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))?;
    let dqp = (d as u128)
        .checked_mul(qp as u128)
        .ok_or_else(|| Error::InvalidParameter("inputs too large".into()))?;
    Ok(power_product(
        FormulaId::Intersection,
        vec![("k", k), ("l", l), ("d", d), ("q", q), ("q'", qp)],
        &[(k, dq), (l, dqp), (8 * (q + qp - 1), exp)],
        0,
        cap_bits,
    ))
}

/// Largest integer g with `x = g^j` for some j >= 1.
fn primitive_root(x: u64) -> u64 {
    let big = BigUint::from(x);
    for j in (2..=big.bits() as u32).rev() {
        let r = big.nth_root(j);
        if Pow::pow(&r, j) == big {
            return u64::try_from(r).expect("root of a u64 fits");
        }
    }
    x
}

/// Whether no positive powers of k and l coincide. Two bases share a
/// power exactly when they are powers of a common integer.
pub fn multiplicatively_independent(k: u64, l: u64) -> Result<bool> {
    if k < 2 || l < 2 {
        return Err(Error::InvalidParameter("bases must be at least 2".into()));
    }
    Ok(primitive_root(k) != primitive_root(l))
}

/// Largest number of vanishing blocks an equation with `terms` summands
/// can split into: every block needs at least two summands.
pub fn max_vanishing_blocks(terms: usize) -> usize {
    terms / 2
}
