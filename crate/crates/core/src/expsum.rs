//! Closed forms for simple sparse terms.
//!
//! Instantiating a term `v0 w1* v1 ... ws* vs` with star exponents
//! n1..ns gives a word whose value in each coordinate is an exponential
//! sum
//!
//! ```text
//! c0 + c1 * k^(e1) + c2 * k^(e2) + ... + cs * k^(es)
//! ```
//!
//! where `e_i` collects the lengths pumped by the *last* i stars,
//! `e_i = d_s n_s + d_{s-1} n_{s-1} + ... + d_{s-i+1} n_{s-i+1}` with
//! `d_j` the length of the j-th starred word. The coefficients are
//! rationals with denominators dividing products of `k^d - 1` factors;
//! the sum itself is always a natural number.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::decompose::SparseTerm;
use crate::error::{Error, Result};

/// Exponential-sum form of a simple sparse term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpSumForm {
    base: u32,
    dim: usize,
    /// Length of the j-th starred word, in term order.
    deltas: Vec<u64>,
    /// `coefficients[i][c]` multiplies `k^(e_i)` in coordinate c; the
    /// exponent `e_i` is pumped by the last i stars.
    coefficients: Vec<Vec<BigRational>>,
    /// Total length of the constant words.
    fixed_len: u64,
}

impl ExpSumForm {
    pub fn new(
        base: u32,
        dim: usize,
        deltas: Vec<u64>,
        coefficients: Vec<Vec<BigRational>>,
        fixed_len: u64,
    ) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter(format!("base {base} below 2")));
        }
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension zero".into()));
        }
        if coefficients.len() != deltas.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "{} stars need {} coefficient rows, got {}",
                deltas.len(),
                deltas.len() + 1,
                coefficients.len()
            )));
        }
        if deltas.iter().any(|&d| d == 0) {
            return Err(Error::InvalidParameter(
                "starred words must be nonempty".into(),
            ));
        }
        if coefficients.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidParameter(format!(
                "coefficient rows must have {dim} entries"
            )));
        }
        Ok(ExpSumForm {
            base,
            dim,
            deltas,
            coefficients,
            fixed_len,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn star_count(&self) -> usize {
        self.deltas.len()
    }

    pub fn deltas(&self) -> &[u64] {
        &self.deltas
    }

    pub fn coefficients(&self) -> &[Vec<BigRational>] {
        &self.coefficients
    }

    pub fn fixed_len(&self) -> u64 {
        self.fixed_len
    }

    /// Exponents `e_0..e_s` of the base inside each sum term, for the
    /// given star exponents; `e_0` is always 0.
    pub fn power_exponents(&self, exponents: &[u64]) -> Result<Vec<u64>> {
        let s = self.deltas.len();
        if exponents.len() != s {
            return Err(Error::InvalidParameter(format!(
                "form has {} stars, got {} exponents",
                s,
                exponents.len()
            )));
        }
        let mut out = vec![0u64; s + 1];
        for i in 1..=s {
            // e_i adds star s - i (0-based) on top of e_{i-1}.
            let j = s - i;
            let add = self.deltas[j]
                .checked_mul(exponents[j])
                .and_then(|x| x.checked_add(out[i - 1]))
                .ok_or_else(|| Error::InvalidParameter("exponent overflow".into()))?;
            out[i] = add;
        }
        Ok(out)
    }

    /// Value tuple at the given star exponents. Fails with
    /// [`Error::NonIntegralValue`] if the sum is not a natural number,
    /// which cannot happen for forms derived from terms.
    pub fn evaluate(&self, exponents: &[u64]) -> Result<Vec<BigUint>> {
        let exps = self.power_exponents(exponents)?;
        let k = BigInt::from(self.base);
        let powers: Vec<BigRational> = exps
            .iter()
            .map(|&e| BigRational::from_integer(Pow::pow(&k, e)))
            .collect();
        let mut values = Vec::with_capacity(self.dim);
        for c in 0..self.dim {
            let total: BigRational = self
                .coefficients
                .iter()
                .zip(&powers)
                .map(|(row, p)| &row[c] * p)
                .sum();
            if !total.is_integer() || total.is_negative() {
                return Err(Error::NonIntegralValue);
            }
            values.push(total.to_integer().to_biguint().expect("checked sign"));
        }
        Ok(values)
    }

    /// All member tuples with every coordinate at most `bound`, sorted by
    /// coordinate sum and then lexicographically, without duplicates.
    pub fn enumerate_values(&self, bound: &BigUint) -> Result<Vec<Vec<BigUint>>> {
        Ok(self
            .enumerate_values_with_exponents(bound)?
            .into_iter()
            .map(|(tuple, _)| tuple)
            .collect())
    }

    /// Like [`ExpSumForm::enumerate_values`], pairing each tuple with the
    /// lowest-weight star exponents that reach it.
    pub fn enumerate_values_with_exponents(
        &self,
        bound: &BigUint,
    ) -> Result<Vec<(Vec<BigUint>, Vec<u64>)>> {
        let s = self.deltas.len();
        // Star j only matters when some coefficient whose exponent it
        // pumps is nonzero; e_i is pumped by stars s-i..s-1.
        let relevant: Vec<bool> = (0..s)
            .map(|j| {
                (s - j..=s).any(|i| self.coefficients[i].iter().any(|c| !c.is_zero()))
            })
            .collect();
        // Any tuple within the bound is reached with every exponent at
        // most cap: a star pumped further only repeats all-zero digits.
        let mut digits = 0u64;
        let mut p = BigUint::one();
        while p <= bound + 2u32 {
            p *= self.base;
            digits += 1;
        }
        let cap = digits + 1;
        let caps: Vec<u64> = relevant.iter().map(|&r| if r { cap } else { 0 }).collect();

        let delta_max = self
            .deltas
            .iter()
            .zip(&relevant)
            .filter(|&(_, &r)| r)
            .map(|(&d, _)| d)
            .max()
            .unwrap_or(1);
        let max_weight: u64 = self
            .deltas
            .iter()
            .zip(&caps)
            .map(|(&d, &c)| d * c)
            .sum();

        let mut seen: HashMap<Vec<BigUint>, Vec<u64>> = HashMap::new();
        let mut misses = 0u64;
        let mut weight = 0u64;
        loop {
            let mut hit = false;
            let mut exponents = vec![0u64; s];
            self.weighted_vectors(weight, 0, &mut exponents, &caps, &mut |exps| {
                let tuple = self.evaluate(exps)?;
                if tuple.iter().all(|v| v <= bound) {
                    hit = true;
                    seen.entry(tuple).or_insert_with(|| exps.to_vec());
                }
                Ok(())
            })?;
            if hit {
                misses = 0;
            } else {
                misses += 1;
                // Values never shrink when an exponent grows, so a window
                // of empty weights as wide as the largest step is final.
                if misses >= delta_max {
                    break;
                }
            }
            if weight >= max_weight {
                break;
            }
            weight += 1;
        }

        let mut out: Vec<(Vec<BigUint>, Vec<u64>)> = seen.into_iter().collect();
        out.sort_by_key(|(tuple, _)| (tuple.iter().sum::<BigUint>(), tuple.clone()));
        Ok(out)
    }

    /// Calls `f` on every exponent vector with `sum(delta_j * n_j)` over
    /// stars `j >= from` equal to `weight`, respecting per-star caps.
    fn weighted_vectors(
        &self,
        weight: u64,
        from: usize,
        exponents: &mut Vec<u64>,
        caps: &[u64],
        f: &mut impl FnMut(&[u64]) -> Result<()>,
    ) -> Result<()> {
        if from == self.deltas.len() {
            if weight == 0 {
                f(exponents)?;
            }
            return Ok(());
        }
        let d = self.deltas[from];
        let top = (weight / d).min(caps[from]);
        for n in 0..=top {
            exponents[from] = n;
            self.weighted_vectors(weight - n * d, from + 1, exponents, caps, f)?;
        }
        exponents[from] = 0;
        Ok(())
    }
}

fn rational_str(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for ExpSumForm {
    /// One line per coordinate, e.g. `x1 = 1 + 6 * 2^(n1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.deltas.len();
        for c in 0..self.dim {
            if c > 0 {
                writeln!(f)?;
            }
            write!(f, "x{} = ", c + 1)?;
            let mut wrote = false;
            for i in 0..=s {
                let coeff = &self.coefficients[i][c];
                if coeff.is_zero() {
                    continue;
                }
                let mag = coeff.abs();
                if !wrote {
                    if coeff.is_negative() {
                        write!(f, "-")?;
                    }
                } else if coeff.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                // Exponent e_i is pumped by the last i stars; render them
                // in term order.
                let exp = (s - i..s)
                    .map(|j| {
                        if self.deltas[j] == 1 {
                            format!("n{}", j + 1)
                        } else {
                            format!("{} n{}", self.deltas[j], j + 1)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" + ");
                if i == 0 {
                    write!(f, "{}", rational_str(&mag))?;
                } else if mag.is_one() {
                    write!(f, "{}^({})", self.base, exp)?;
                } else {
                    write!(f, "{} * {}^({})", rational_str(&mag), self.base, exp)?;
                }
                wrote = true;
            }
            if !wrote {
                write!(f, "0")?;
            }
        }
        Ok(())
    }
}

/// Exponential-sum form of a term. The form evaluates, at any exponents,
/// to exactly the value tuple of the instantiated word.
pub fn to_expsum(t: &SparseTerm) -> ExpSumForm {
    let s = t.star_count();
    let dim = t.dim();
    let k = BigInt::from(t.base());

    // suffix_v_len[i] = total length of constant words v_i..v_s.
    let mut suffix_v_len = vec![0u64; s + 2];
    for i in (0..=s).rev() {
        suffix_v_len[i] = suffix_v_len[i + 1] + t.prefix(i).len() as u64;
    }

    let value_of = |w: &crate::words::DigitWord| -> Vec<BigInt> {
        w.evaluate().into_iter().map(BigInt::from).collect()
    };

    let mut coefficients =
        vec![vec![BigRational::zero(); dim]; s + 1];
    for i in 0..=s {
        // v_i sits above the stars i..s-1, shifted by the constants after it.
        let shift = BigRational::from_integer(Pow::pow(&k, suffix_v_len[i + 1]));
        for (c, v) in value_of(t.prefix(i)).into_iter().enumerate() {
            coefficients[s - i][c] += BigRational::from_integer(v) * &shift;
        }
    }
    for j in 0..s {
        // Star j contributes a geometric series: [w] * (k^(d n) - 1) /
        // (k^d - 1) below the earlier stars, which splits across the two
        // adjacent exponent levels.
        let d = t.star(j).len() as u64;
        let denom = BigRational::from_integer(Pow::pow(&k, d) - BigInt::one());
        let shift = BigRational::from_integer(Pow::pow(&k, suffix_v_len[j + 1]));
        for (c, w) in value_of(t.star(j)).into_iter().enumerate() {
            let g = BigRational::from_integer(w) * &shift / &denom;
            coefficients[s - j][c] += &g;
            coefficients[s - j - 1][c] -= &g;
        }
    }

    let deltas: Vec<u64> = (0..s).map(|j| t.star(j).len() as u64).collect();
    ExpSumForm::new(t.base(), dim, deltas, coefficients, suffix_v_len[0])
        .expect("term shape carries over")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::DigitWord;

    fn word(base: u32, digits: &str) -> DigitWord {
        DigitWord::from_coordinate_strings(base, &[digits]).unwrap()
    }

    fn term(base: u32, prefixes: &[&str], stars: &[&str]) -> SparseTerm {
        SparseTerm::new(
            base,
            1,
            prefixes.iter().map(|v| word(base, v)).collect(),
            stars.iter().map(|w| word(base, w)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn sample_form_has_frozen_coefficients() {
        let form = to_expsum(&term(2, &["11", "1"], &["0"]));
        assert_eq!(form.deltas(), &[1]);
        assert_eq!(form.fixed_len(), 3);
        let ints: Vec<BigInt> = form
            .coefficients()
            .iter()
            .map(|row| row[0].to_integer())
            .collect();
        assert_eq!(ints, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(form.to_string(), "x1 = 1 + 6 * 2^(n1)");
    }

    #[test]
    fn pure_repetition_gives_geometric_form() {
        let form = to_expsum(&term(2, &["", ""], &["1"]));
        let ints: Vec<BigInt> = form
            .coefficients()
            .iter()
            .map(|row| row[0].to_integer())
            .collect();
        assert_eq!(ints, vec![BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(form.to_string(), "x1 = -1 + 2^(n1)");
        assert_eq!(form.evaluate(&[4]).unwrap(), vec![BigUint::from(15u32)]);
    }

    #[test]
    fn form_matches_direct_instantiation() {
        let t = term(3, &["12", "0", "2"], &["21", "102"]);
        let form = to_expsum(&t);
        for n1 in 0..5 {
            for n2 in 0..5 {
                assert_eq!(
                    form.evaluate(&[n1, n2]).unwrap(),
                    t.evaluate(&[n1, n2]).unwrap(),
                    "exponents {n1},{n2}"
                );
            }
        }
    }

    #[test]
    fn random_terms_evaluate_identically() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xf0_60d5);
        for _ in 0..300 {
            let base = *[2u32, 3, 5].iter().nth(rng.gen_range(0..3)).unwrap();
            let dim = rng.gen_range(1..=2);
            let s = rng.gen_range(0..=3);
            let mut rand_word = |min_len: usize| {
                let len = rng.gen_range(min_len..=3);
                let symbols = (0..len)
                    .map(|_| (0..dim).map(|_| rng.gen_range(0..base)).collect())
                    .collect();
                DigitWord::new(base, dim, symbols).unwrap()
            };
            let prefixes = (0..=s).map(|_| rand_word(0)).collect();
            let stars = (0..s).map(|_| rand_word(1)).collect();
            let t = SparseTerm::new(base, dim, prefixes, stars).unwrap();
            let form = to_expsum(&t);
            let exponents: Vec<u64> = (0..s).map(|_| rng.gen_range(0..=4)).collect();
            assert_eq!(
                form.evaluate(&exponents).unwrap(),
                t.evaluate(&exponents).unwrap()
            );
        }
    }

    #[test]
    fn enumerates_sample_values() {
        let form = to_expsum(&term(2, &["11", "1"], &["0"]));
        let values = form.enumerate_values(&BigUint::from(1u32 << 14)).unwrap();
        let expect: Vec<Vec<BigUint>> = (0..12)
            .map(|n| vec![BigUint::from(3u64 * (1 << (n + 1)) + 1)])
            .collect();
        assert_eq!(values, expect);
    }

    #[test]
    fn enumerates_geometric_values() {
        let form = to_expsum(&term(2, &["", ""], &["1"]));
        let values = form.enumerate_values(&BigUint::from(1000u32)).unwrap();
        let expect: Vec<Vec<BigUint>> = (0..10)
            .map(|n| vec![BigUint::from((1u64 << n) - 1)])
            .collect();
        assert_eq!(values, expect);
    }

    #[test]
    fn enumeration_collapses_zero_pumping() {
        // Words 0^n all denote zero.
        let t = term(2, &["", ""], &["0"]);
        let values = to_expsum(&t).enumerate_values(&BigUint::from(5u32)).unwrap();
        assert_eq!(values, vec![vec![BigUint::zero()]]);
    }

    #[test]
    fn enumeration_covers_two_dimensions() {
        // (2^(n+1), 2^n): prefix (1,0), star (0,1) has pair value (2,1)
        // after the shift.
        let t = SparseTerm::new(
            2,
            2,
            vec![
                DigitWord::from_coordinate_strings(2, &["1", "0"]).unwrap(),
                DigitWord::empty(2, 2).unwrap(),
            ],
            vec![DigitWord::from_coordinate_strings(2, &["0", "1"]).unwrap()],
        )
        .unwrap();
        let form = to_expsum(&t);
        let values = form.enumerate_values(&BigUint::from(40u32)).unwrap();
        // All coordinates bounded by 40: n = 0..5 gives first coordinate
        // 2^(n)... the word 1 0^n has value 2^n, second coordinate
        // 0 1^n = 2^n - 1.
        let expect: Vec<Vec<BigUint>> = (0..6)
            .map(|n| {
                vec![
                    BigUint::from(1u64 << n),
                    BigUint::from((1u64 << n) - 1),
                ]
            })
            .collect();
        assert_eq!(values, expect);
    }

    #[test]
    fn evaluate_checks_exponent_count() {
        let form = to_expsum(&term(2, &["1", ""], &["0"]));
        assert!(form.evaluate(&[]).is_err());
        assert!(form.evaluate(&[1, 2]).is_err());
    }

    #[test]
    fn non_integral_forms_are_rejected() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let form = ExpSumForm::new(2, 1, vec![], vec![vec![half]], 0).unwrap();
        assert_eq!(form.evaluate(&[]), Err(Error::NonIntegralValue));
    }

    #[test]
    fn negative_values_are_rejected() {
        let minus = BigRational::from_integer(BigInt::from(-3));
        let form = ExpSumForm::new(2, 1, vec![], vec![vec![minus]], 0).unwrap();
        assert_eq!(form.evaluate(&[]), Err(Error::NonIntegralValue));
    }

    #[test]
    fn display_renders_multi_star_exponents() {
        let t = term(2, &["1", "", "1"], &["10", "0"]);
        let form = to_expsum(&t);
        let text = form.to_string();
        assert!(text.contains("2^(n2)"), "{text}");
        assert!(text.contains("2 n1 + n2"), "{text}");
    }
}
