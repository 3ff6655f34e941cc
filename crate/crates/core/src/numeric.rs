//! Floating-point views of arbitrary-precision integers.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// log2 of a positive integer, accurate to roughly f64 precision even when
/// the value itself overflows f64. Returns -inf for zero.
pub(crate) fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").log2();
    }
    // Top 53 bits as mantissa, remainder as exponent.
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53 bits fit in f64");
    top.log2() + shift as f64
}

/// log10 of a positive integer. Returns -inf for zero.
#[cfg(test)]
pub(crate) fn log10_biguint(x: &BigUint) -> f64 {
    log2_biguint(x) * std::f64::consts::LOG10_2
}
