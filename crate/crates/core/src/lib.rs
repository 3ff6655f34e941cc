//! Analysis of k-automatic subsets of N^d presented by digit automata.
//!
//! An automaton over tuples of base-k digits accepts a set of naturals (or
//! tuples of naturals) through the canonical expansions of its members.
//! This crate classifies such sets by growth, decomposes the sparse ones
//! into simple sparse terms `v0 w1* v1 ... ws* vs`, turns terms into
//! closed-form exponential sums, evaluates arbitrary-precision bound
//! formulas for unit-equation and intersection counting problems, and
//! enumerates bounded intersections of sets automatic in multiplicatively
//! independent bases.

mod bounds;
mod decompose;
mod dfa;
mod error;
mod expsum;
mod intersect;
mod numeric;
mod sparsity;
mod text;
mod words;

pub use bounds::{
    degenerate_pair_bound, degenerate_pair_bound_with_cap, intersection_bound,
    intersection_bound_with_cap, max_vanishing_blocks, multiplicatively_independent,
    nondegenerate_pair_bound, nondegenerate_pair_bound_with_cap, solution_count_bound,
    solution_count_bound_with_cap, term_pair_bound, term_pair_bound_with_cap, BoundValue,
    FormulaId, DEFAULT_EXACT_BIT_CAP,
};
pub use decompose::{decompose, term_to_dfa, terms_to_dfa, verify_decomposition, SparseTerm};
pub use dfa::Dfa;
pub use error::{Error, Result};
pub use expsum::{to_expsum, ExpSumForm};
pub use intersect::{
    bounded_intersection, pi_count, Exhaustiveness, IntersectionResult, UnitEquationInstance,
};
pub use sparsity::{
    classify, growth_estimate, member_counts, GrowthEstimate, NonSparseWitness, SparsityReport,
};
pub use text::{
    parse_aut, parse_term, parse_term_expression, print_aut, print_term, print_term_expression,
    print_word,
};
pub use words::{expand, DigitWord, Direction};
