//! Bounded intersection of automatic sets.
//!
//! Same-base intersections are computed exactly through the product
//! automaton. Cross-base intersections are undecidable territory in
//! general, but when the first set is sparse its members come from
//! finitely many exponential sums, so all members with coordinate sum up
//! to a search bound can be enumerated and tested against the second
//! automaton. For multiplicatively independent bases the result also
//! carries the explicit counting bound for the whole (unbounded)
//! intersection.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::bounds::{intersection_bound, multiplicatively_independent, BoundValue};
use crate::decompose::{decompose, SparseTerm};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::expsum::{to_expsum, ExpSumForm};
use crate::sparsity::normalized_machine;
use crate::words::{expand, symbol_digit_sum};

/// How much of the intersection the witness list covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exhaustiveness {
    /// Every member with coordinate sum at most the bound is listed;
    /// larger members may exist.
    UpTo(BigUint),
    /// The witness list is the entire intersection.
    UnboundedExact,
}

/// One witness value rewritten as a vanishing sum of powers, with its
/// canonical split into minimal vanishing blocks.
///
/// The witness satisfies
/// `lhs_constant + sum lhs_coeffs[j] * lhs_base^lhs_powers[j]
///  = rhs_constant + sum rhs_coeffs[i] * rhs_base^rhs_powers[i]`,
/// where both sides equal the witness itself. Only nonzero terms are
/// stored. `partition` splits the terms of `lhs - rhs = 0` into minimal
/// vanishing blocks; its indices enumerate the lhs constant (if
/// present), the lhs power terms, the rhs constant (if present), then
/// the rhs power terms.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitEquationInstance {
    /// The witness (dimension 1).
    pub value: Vec<BigUint>,
    /// Base of the left side (the membership-tested set).
    pub lhs_base: u32,
    /// Base of the right side (the enumerated sparse set).
    pub rhs_base: u32,
    pub lhs_constant: Option<BigRational>,
    pub lhs_coeffs: Vec<BigRational>,
    pub lhs_powers: Vec<u64>,
    pub rhs_constant: Option<BigRational>,
    pub rhs_coeffs: Vec<BigRational>,
    pub rhs_powers: Vec<u64>,
    pub partition: Vec<Vec<usize>>,
}

impl UnitEquationInstance {
    /// Rendered terms of the vanishing sum `lhs - rhs`, in partition
    /// index order, as (negative, magnitude) pairs.
    fn signed_terms(&self) -> Vec<(bool, String)> {
        let mut parts = Vec::new();
        let mut side = |constant: &Option<BigRational>,
                        coeffs: &[BigRational],
                        powers: &[u64],
                        base: u32,
                        negate: bool| {
            if let Some(c) = constant {
                parts.push((c.is_negative() != negate, rational_text(&c.abs())));
            }
            for (c, &p) in coeffs.iter().zip(powers) {
                let mag = c.abs();
                let body = if mag.is_one() {
                    format!("{base}^{p}")
                } else {
                    format!("{} * {base}^{p}", rational_text(&mag))
                };
                parts.push((c.is_negative() != negate, body));
            }
        };
        side(
            &self.lhs_constant,
            &self.lhs_coeffs,
            &self.lhs_powers,
            self.lhs_base,
            false,
        );
        side(
            &self.rhs_constant,
            &self.rhs_coeffs,
            &self.rhs_powers,
            self.rhs_base,
            true,
        );
        parts
    }
}

impl std::fmt::Display for UnitEquationInstance {
    /// Renders the vanishing sum, e.g. `3^1 - 1 - 2 * 2^0 = 0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, (negative, body)) in self.signed_terms().iter().enumerate() {
            if i == 0 {
                if *negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if *negative { "-" } else { "+" })?;
            }
            write!(f, "{body}")?;
        }
        write!(f, " = 0")
    }
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Result of [`bounded_intersection`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionResult {
    /// Members of both sets with coordinate sum at most the search bound,
    /// sorted by coordinate sum and then lexicographically.
    pub witnesses: Vec<Vec<BigUint>>,
    pub search_bound: BigUint,
    pub exhaustive: Exhaustiveness,
    /// Explicit bound on the size of the whole intersection, available
    /// when the bases are multiplicatively independent.
    pub count_bound: Option<BoundValue>,
    /// Per-witness unit-equation views, present when requested.
    pub per_witness: Option<Vec<UnitEquationInstance>>,
}

/// Members of both `x` and `y` with coordinate sum at most `bound`.
///
/// With equal bases the product automaton makes the search exact, and a
/// finite intersection that fits under the bound is reported as the
/// whole intersection. With distinct bases `x` must be sparse: its
/// members are enumerated through their closed forms and tested against
/// `y`. When `diagnostics` is set (dimension 1 only, both sets sparse)
/// every witness is also rewritten as a vanishing sum of powers split
/// into minimal vanishing blocks.
pub fn bounded_intersection(
    x: &Dfa,
    y: &Dfa,
    bound: &BigUint,
    diagnostics: bool,
) -> Result<IntersectionResult> {
    if x.dim() != y.dim() {
        return Err(Error::DimMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let mx = normalized_machine(x)?;
    let my = normalized_machine(y)?;
    let d = mx.dim();

    let mut witnesses: Vec<Vec<BigUint>> = Vec::new();
    let mut exhaustive = Exhaustiveness::UpTo(bound.clone());

    if mx.base() == my.base() {
        let product = mx.product(&my, |a, b| a && b)?;
        let terms = decompose(&product)?;
        if terms.iter().all(|t| t.star_count() == 0) {
            // Finite intersection: every member is a constant word.
            let all: Vec<Vec<BigUint>> = terms.iter().map(|t| t.prefix(0).evaluate()).collect();
            if all.iter().all(|v| &v.iter().sum::<BigUint>() <= bound) {
                exhaustive = Exhaustiveness::UnboundedExact;
            }
            witnesses = all
                .into_iter()
                .filter(|v| &v.iter().sum::<BigUint>() <= bound)
                .collect();
        } else {
            for t in &terms {
                let form = to_expsum(t);
                for v in form.enumerate_values(bound)? {
                    if &v.iter().sum::<BigUint>() <= bound {
                        witnesses.push(v);
                    }
                }
            }
        }
    } else {
        let terms = decompose(&mx)?;
        let finite = terms.iter().all(|t| t.star_count() == 0);
        for t in &terms {
            let form = to_expsum(t);
            for v in form.enumerate_values(bound)? {
                if &v.iter().sum::<BigUint>() <= bound && my.member(&v)? {
                    witnesses.push(v);
                }
            }
        }
        // A finite x whose members all fit under the bound was tested
        // in full, so the witness list is the whole intersection.
        if finite
            && terms
                .iter()
                .all(|t| &t.prefix(0).evaluate().iter().sum::<BigUint>() <= bound)
        {
            exhaustive = Exhaustiveness::UnboundedExact;
        }
    }

    witnesses.sort_by_key(|v| (v.iter().sum::<BigUint>(), v.clone()));
    witnesses.dedup();

    let count_bound = if mx.base() != my.base()
        && multiplicatively_independent(mx.base() as u64, my.base() as u64)?
    {
        Some(intersection_bound(
            mx.base() as u64,
            my.base() as u64,
            d as u64,
            mx.state_count() as u64,
            my.state_count() as u64,
        )?)
    } else {
        None
    };

    let per_witness = if diagnostics {
        if d != 1 {
            return Err(Error::InvalidParameter(
                "subsum diagnostics are defined for dimension 1 only".into(),
            ));
        }
        let x_terms = decompose(&mx)?;
        let y_terms = decompose(&my)?;
        let x_hits = term_hits(&x_terms, bound)?;
        let y_hits = term_hits(&y_terms, bound)?;
        let mut instances = Vec::with_capacity(witnesses.len());
        for w in &witnesses {
            let (xf, xe) = x_hits.get(w).expect("witness is a member of the first set");
            let (yf, ye) = y_hits
                .get(w)
                .expect("witness is a member of the second set");
            instances.push(unit_equation_instance(w.clone(), xf, xe, yf, ye)?);
        }
        Some(instances)
    } else {
        None
    };

    Ok(IntersectionResult {
        witnesses,
        search_bound: bound.clone(),
        exhaustive,
        count_bound,
        per_witness,
    })
}

/// Closed form and witness exponents for every value of `terms` with all
/// coordinates at most `bound`.
fn term_hits(
    terms: &[SparseTerm],
    bound: &BigUint,
) -> Result<HashMap<Vec<BigUint>, (ExpSumForm, Vec<u64>)>> {
    let mut hits = HashMap::new();
    for t in terms {
        let form = to_expsum(t);
        for (tuple, exps) in form.enumerate_values_with_exponents(bound)? {
            hits.entry(tuple).or_insert_with(|| (form.clone(), exps));
        }
    }
    Ok(hits)
}

/// Nonzero constant and nonzero power terms of a dimension-1 form at the
/// given star exponents.
fn nonzero_terms(
    form: &ExpSumForm,
    exps: &[u64],
) -> Result<(Option<BigRational>, Vec<BigRational>, Vec<u64>)> {
    let powers = form.power_exponents(exps)?;
    let rows = form.coefficients();
    let constant = (!rows[0][0].is_zero()).then(|| rows[0][0].clone());
    let mut coeffs = Vec::new();
    let mut pows = Vec::new();
    for (row, &p) in rows.iter().zip(&powers).skip(1) {
        if !row[0].is_zero() {
            coeffs.push(row[0].clone());
            pows.push(p);
        }
    }
    Ok((constant, coeffs, pows))
}

fn unit_equation_instance(
    value: Vec<BigUint>,
    x_form: &ExpSumForm,
    x_exps: &[u64],
    y_form: &ExpSumForm,
    y_exps: &[u64],
) -> Result<UnitEquationInstance> {
    let (rhs_constant, rhs_coeffs, rhs_powers) = nonzero_terms(x_form, x_exps)?;
    let (lhs_constant, lhs_coeffs, lhs_powers) = nonzero_terms(y_form, y_exps)?;

    // Terms of lhs - rhs in partition index order.
    let mut terms: Vec<BigRational> = Vec::new();
    let mut side = |constant: &Option<BigRational>,
                    coeffs: &[BigRational],
                    powers: &[u64],
                    base: u32,
                    negate: bool| {
        let b = BigInt::from(base);
        if let Some(c) = constant {
            terms.push(if negate { -c.clone() } else { c.clone() });
        }
        for (c, &p) in coeffs.iter().zip(powers) {
            let t = c * BigRational::from_integer(Pow::pow(&b, p));
            terms.push(if negate { -t } else { t });
        }
    };
    side(&lhs_constant, &lhs_coeffs, &lhs_powers, y_form.base(), false);
    side(&rhs_constant, &rhs_coeffs, &rhs_powers, x_form.base(), true);
    debug_assert!(
        terms.iter().sum::<BigRational>().is_zero(),
        "both closed forms evaluate to the witness"
    );
    let partition = minimal_vanishing_partition(&terms);

    Ok(UnitEquationInstance {
        value,
        lhs_base: y_form.base(),
        rhs_base: x_form.base(),
        lhs_constant,
        lhs_coeffs,
        lhs_powers,
        rhs_constant,
        rhs_coeffs,
        rhs_powers,
        partition,
    })
}

/// Splits a vanishing sum into minimal vanishing blocks: repeatedly
/// removes the zero-sum subset of smallest cardinality (ties broken by
/// the smallest index set), which cannot contain a smaller vanishing
/// subset. The input must sum to zero.
fn minimal_vanishing_partition(terms: &[BigRational]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..terms.len()).collect();
    let mut blocks = Vec::new();
    while !remaining.is_empty() {
        let m = remaining.len();
        let mut best: Option<(u32, u64)> = None;
        for mask in 1..(1u64 << m) {
            let sum: BigRational = (0..m)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| terms[remaining[i]].clone())
                .sum();
            if sum.is_zero() {
                let key = (mask.count_ones(), mask);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, mask) = best.expect("a sum that vanishes splits into vanishing blocks");
        let block: Vec<usize> = (0..m)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| remaining[i])
            .collect();
        remaining.retain(|g| !block.contains(g));
        blocks.push(block);
    }
    blocks
}

/// Number of members whose coordinates sum to at most `bound`, computed
/// by a digit walk over the bound's expansion rather than by
/// enumeration.
pub fn pi_count(a: &Dfa, bound: &BigUint) -> Result<BigUint> {
    let m = normalized_machine(a)?;
    let d = m.dim() as i64;
    let k = m.base() as i64;
    let asize = m.alphabet_len();
    let x = expand(std::slice::from_ref(bound), m.base())?;

    // Comparison status of (digit sum so far) - (bound prefix): index 0
    // means provably at most -d (a deficit no remaining suffix can turn
    // into an overshoot), indices 1..=d hold the exact difference
    // index - d. Differences of 1 or more are unrecoverable overshoots
    // and are dropped.
    let width = (d + 1) as usize;
    let clamp = |v: i64| -> Option<usize> {
        if v >= 1 {
            None
        } else if v <= -d {
            Some(0)
        } else {
            Some((v + d) as usize)
        }
    };

    let mut started = vec![BigUint::zero(); m.state_count() * width];
    // Exact deficit of the not-yet-started prefix (None = below -d).
    let mut pending: Option<i64> = Some(0);
    for p in 0..x.len() {
        let xd = x.symbols()[p][0] as i64;
        let mut next = vec![BigUint::zero(); m.state_count() * width];
        for q in 0..m.state_count() {
            for cs in 0..width {
                let count = &started[q * width + cs];
                if count.is_zero() {
                    continue;
                }
                for sym in 0..asize {
                    let ds = symbol_digit_sum(m.base(), m.dim(), sym) as i64;
                    let ncs = if cs == 0 {
                        Some(0)
                    } else {
                        clamp(k * (cs as i64 - d) + ds - xd)
                    };
                    if let Some(ncs) = ncs {
                        next[m.step(q, sym) * width + ncs] += count;
                    }
                }
            }
        }
        // A member's expansion may begin here, on a nonzero symbol.
        for sym in 1..asize {
            let ds = symbol_digit_sum(m.base(), m.dim(), sym) as i64;
            let ncs = match pending {
                None => Some(0),
                Some(v) => clamp(k * v + ds - xd),
            };
            if let Some(ncs) = ncs {
                next[m.step(m.initial(), sym) * width + ncs] += 1u32;
            }
        }
        pending = pending.and_then(|v| {
            let nv = k * v - xd;
            (nv > -d).then_some(nv)
        });
        started = next;
    }

    let mut total = BigUint::zero();
    for q in 0..m.state_count() {
        if m.is_accepting(q) {
            for cs in 0..width {
                total += &started[q * width + cs];
            }
        }
    }
    // The zero tuple is the empty word; its sum never exceeds the bound.
    if m.is_accepting(m.initial()) {
        total += 1u32;
    }
    Ok(total)
}
