//! Decomposition of sparse sets into simple sparse terms.
//!
//! A simple sparse term denotes the word language
//! `v0 w1* v1 w2* ... ws* vs` with every starred word nonempty. Every
//! sparse set is a finite union of such terms, and the decomposition
//! computed here is exact: the union of the produced term languages equals
//! the canonical language of the input automaton.
//!
//! The recursion works on the minimized msd-first acceptor of the
//! canonical language. At a state on no cycle, words branch over the
//! outgoing letters. At a state inside a cycle the sparsity condition
//! forces a unique return cycle `w`; words either stay on that cycle
//! forever consuming `w* (prefix of w)`, or pump `w*`, slide along a
//! prefix, and leave the component on a letter that departs it. Either
//! way the set of live states strictly shrinks, so the recursion
//! terminates with a bounded number of terms.

use num_bigint::BigUint;

use crate::dfa::{Dfa, Nfa};
use crate::error::{Error, Result};
use crate::sparsity::{analyze, normalized_machine};
use crate::words::{symbol_digits, DigitWord, Direction};

/// One simple sparse term `v0 w1* v1 ... ws* vs` over msd-first words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseTerm {
    base: u32,
    dim: usize,
    prefixes: Vec<DigitWord>,
    stars: Vec<DigitWord>,
}

impl SparseTerm {
    /// Builds a term from its constant words `prefixes` (s + 1 of them)
    /// and starred words `stars` (s of them, each nonempty).
    pub fn new(
        base: u32,
        dim: usize,
        prefixes: Vec<DigitWord>,
        stars: Vec<DigitWord>,
    ) -> Result<Self> {
        if prefixes.len() != stars.len() + 1 {
            return Err(Error::InvalidParameter(format!(
                "term needs one more constant word than starred words, got {} and {}",
                prefixes.len(),
                stars.len()
            )));
        }
        for w in prefixes.iter().chain(stars.iter()) {
            if w.base() != base {
                return Err(Error::BaseMismatch {
                    left: base,
                    right: w.base(),
                });
            }
            if w.dim() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: w.dim(),
                });
            }
        }
        if let Some(w) = stars.iter().find(|w| w.is_empty()) {
            let _ = w;
            return Err(Error::InvalidParameter(
                "starred words must be nonempty".into(),
            ));
        }
        Ok(SparseTerm {
            base,
            dim,
            prefixes,
            stars,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of starred words.
    pub fn star_count(&self) -> usize {
        self.stars.len()
    }

    /// Constant word before star `i`; index `star_count()` is the tail.
    pub fn prefix(&self, i: usize) -> &DigitWord {
        &self.prefixes[i]
    }

    pub fn star(&self, i: usize) -> &DigitWord {
        &self.stars[i]
    }

    pub fn prefixes(&self) -> &[DigitWord] {
        &self.prefixes
    }

    pub fn stars(&self) -> &[DigitWord] {
        &self.stars
    }

    /// Total length of the constant words.
    pub fn fixed_len(&self) -> usize {
        self.prefixes.iter().map(DigitWord::len).sum()
    }

    /// The word with star `i` repeated `exponents[i]` times.
    pub fn instantiate(&self, exponents: &[u64]) -> Result<DigitWord> {
        if exponents.len() != self.stars.len() {
            return Err(Error::InvalidParameter(format!(
                "term has {} stars, got {} exponents",
                self.stars.len(),
                exponents.len()
            )));
        }
        let mut out = self.prefixes[0].clone();
        for (i, w) in self.stars.iter().enumerate() {
            for _ in 0..exponents[i] {
                out = out.concat(w)?;
            }
            out = out.concat(&self.prefixes[i + 1])?;
        }
        Ok(out)
    }

    /// The member denoted by the instantiated word.
    pub fn evaluate(&self, exponents: &[u64]) -> Result<Vec<BigUint>> {
        Ok(self.instantiate(exponents)?.evaluate())
    }

    /// Keeps only the 1-based `coords` of every symbol.
    pub fn project(&self, coords: &[usize]) -> Result<SparseTerm> {
        let prefixes = self
            .prefixes
            .iter()
            .map(|w| w.project(coords))
            .collect::<Result<_>>()?;
        let stars = self
            .stars
            .iter()
            .map(|w| w.project(coords))
            .collect::<Result<_>>()?;
        SparseTerm::new(self.base, coords.len(), prefixes, stars)
    }
}

/// Internal recursion state: terms are built back to front, so each step
/// only ever extends the front of the word.
struct Builder<'a> {
    machine: &'a Dfa,
    comp: &'a [usize],
    cyclic: &'a [bool],
}

impl Builder<'_> {
    /// All terms for words that run from `q` to acceptance while visiting
    /// only `alive` states. `alive` is always a union of complete strongly
    /// connected components, which keeps return cycles unique.
    fn terms(&self, alive: &[bool], q: usize) -> Vec<SparseTerm> {
        let m = self.machine;
        let asize = m.alphabet_len();
        let mut out = Vec::new();

        if !self.cyclic[self.comp[q]] {
            // No cycle through q: emit the empty word if q accepts, then
            // branch over outgoing letters.
            if m.is_accepting(q) {
                out.push(self.empty_term());
            }
            let mut next_alive = alive.to_vec();
            next_alive[q] = false;
            for sym in 0..asize {
                let t = m.step(q, sym);
                if t == q || !next_alive[t] {
                    continue;
                }
                for sub in self.terms(&next_alive, t) {
                    out.push(self.prepend_symbol(sym, sub));
                }
            }
            return out;
        }

        // q sits on a cycle. Walk the unique internal edges once around.
        let cid = self.comp[q];
        let mut cycle_syms = Vec::new();
        let mut cycle_states = Vec::new();
        let mut cur = q;
        loop {
            cycle_states.push(cur);
            let internal: Vec<usize> = (0..asize)
                .filter(|&s| self.comp[m.step(cur, s)] == cid)
                .collect();
            assert_eq!(
                internal.len(),
                1,
                "decomposition requires a sparse machine"
            );
            cycle_syms.push(internal[0]);
            cur = m.step(cur, internal[0]);
            if cur == q {
                break;
            }
        }
        let r = cycle_states.len();
        let w = self.word_of(&cycle_syms);

        // Words that never leave the cycle: w^n followed by the prefix
        // ending at an accepting cycle state.
        for (len, &state) in cycle_states.iter().enumerate() {
            if m.is_accepting(state) {
                let v = self.word_of(&cycle_syms[..len]);
                out.push(
                    SparseTerm::new(
                        m.base(),
                        m.dim(),
                        vec![self.empty_word(), v],
                        vec![w.clone()],
                    )
                    .expect("cycle words are nonempty"),
                );
            }
        }

        // Words that leave the cycle: w^n, a prefix of w, then a letter
        // departing the component.
        let mut next_alive = alive.to_vec();
        for &s in &cycle_states {
            next_alive[s] = false;
        }
        for target in 0..m.state_count() {
            if !next_alive[target] {
                continue;
            }
            let mut subs: Option<Vec<SparseTerm>> = None;
            for len in 0..r {
                for sym in 0..asize {
                    if m.step(cycle_states[len], sym) != target {
                        continue;
                    }
                    let subs = subs.get_or_insert_with(|| self.terms(&next_alive, target));
                    let mut junction = cycle_syms[..len].to_vec();
                    junction.push(sym);
                    let junction = self.word_of(&junction);
                    for sub in subs.iter() {
                        out.push(self.prepend_star(&w, &junction, sub.clone()));
                    }
                }
            }
        }
        out
    }

    fn empty_word(&self) -> DigitWord {
        DigitWord::empty(self.machine.base(), self.machine.dim()).expect("valid machine alphabet")
    }

    fn empty_term(&self) -> SparseTerm {
        SparseTerm::new(
            self.machine.base(),
            self.machine.dim(),
            vec![self.empty_word()],
            vec![],
        )
        .expect("empty term is well formed")
    }

    fn word_of(&self, syms: &[usize]) -> DigitWord {
        let m = self.machine;
        let symbols = syms
            .iter()
            .map(|&s| symbol_digits(m.base(), m.dim(), s))
            .collect();
        DigitWord::new(m.base(), m.dim(), symbols).expect("symbol indices are in range")
    }

    fn prepend_symbol(&self, sym: usize, mut term: SparseTerm) -> SparseTerm {
        let head = self.word_of(&[sym]);
        term.prefixes[0] = head
            .concat(&term.prefixes[0])
            .expect("same base and dimension");
        term
    }

    /// Turns `term` into `w* junction term`.
    fn prepend_star(&self, w: &DigitWord, junction: &DigitWord, mut term: SparseTerm) -> SparseTerm {
        term.prefixes[0] = junction
            .concat(&term.prefixes[0])
            .expect("same base and dimension");
        term.prefixes.insert(0, self.empty_word());
        term.stars.insert(0, w.clone());
        term
    }
}

/// Decomposes the set accepted by `a` into simple sparse terms over
/// msd-first canonical words. The union of the term languages equals the
/// canonical language exactly, and distinct terms denote disjoint word
/// languages. Fails with [`Error::NotSparse`] when no finite decomposition
/// exists.
pub fn decompose(a: &Dfa) -> Result<Vec<SparseTerm>> {
    let an = analyze(a)?;
    if let Some(witness) = an.witness {
        return Err(Error::NotSparse { witness });
    }
    let m = &an.machine;
    if !an.useful[m.initial()] {
        return Ok(Vec::new());
    }
    let builder = Builder {
        machine: m,
        comp: &an.comp,
        cyclic: &an.cyclic,
    };
    let terms = builder.terms(&an.useful, m.initial());

    // Size invariants, with |Q| the full minimized state count: at most
    // (|Q|-1)! * sum N^i terms, each with short star and constant words.
    let q = m.state_count();
    let n = m.alphabet_len();
    let bound: BigUint = (1..q).map(BigUint::from).product::<BigUint>()
        * (0..q).map(|i| BigUint::from(n).pow(i as u32)).sum::<BigUint>();
    assert!(BigUint::from(terms.len()) <= bound);
    for t in &terms {
        let star_len: usize = t.stars.iter().map(DigitWord::len).sum();
        assert!(star_len <= q - 1);
        assert!(t.fixed_len() <= n * (q - 1));
    }
    Ok(terms)
}

/// Minimal msd-first acceptor of the word language of `terms`.
pub fn terms_to_dfa(base: u32, dim: usize, terms: &[SparseTerm]) -> Result<Dfa> {
    crate::words::alphabet_size(base, dim)?;
    let mut nfa = Nfa::new(base, dim, 0);
    for t in terms {
        if t.base() != base {
            return Err(Error::BaseMismatch {
                left: base,
                right: t.base(),
            });
        }
        if t.dim() != dim {
            return Err(Error::DimMismatch {
                left: dim,
                right: t.dim(),
            });
        }
        let start = nfa.add_state();
        nfa.initial.push(start);
        let mut cur = start;
        for i in 0..=t.star_count() {
            for p in 0..t.prefix(i).len() {
                let next = nfa.add_state();
                nfa.add_edge(cur, t.prefix(i).symbol_index_at(p), next);
                cur = next;
            }
            if i < t.star_count() {
                let w = t.star(i);
                // Loop of |w| states anchored at cur.
                let mut inner = cur;
                for p in 0..w.len() {
                    let next = if p + 1 == w.len() { cur } else { nfa.add_state() };
                    nfa.add_edge(inner, w.symbol_index_at(p), next);
                    inner = next;
                }
                // Consecutive loops must not share an anchor state, or the
                // machine would accept interleavings of the starred words.
                let after = nfa.add_state();
                nfa.eps[cur].push(after);
                cur = after;
            }
        }
        nfa.accepting[cur] = true;
    }
    Ok(nfa.determinize(Direction::Msd).minimize())
}

/// Minimal msd-first acceptor of the word language of one term.
pub fn term_to_dfa(t: &SparseTerm) -> Result<Dfa> {
    terms_to_dfa(t.base(), t.dim(), std::slice::from_ref(t))
}

/// Checks that `terms` and the canonical language of `a` agree on all
/// words of length at most `max_len`. Returns true when they agree; a
/// decomposition produced by [`decompose`] agrees at every length.
pub fn verify_decomposition(a: &Dfa, terms: &[SparseTerm], max_len: usize) -> Result<bool> {
    let m = normalized_machine(a)?;
    let union = terms_to_dfa(m.base(), m.dim(), terms)?;
    let xor = m.product(&union, |x, y| x != y)?;
    Ok(match shortest_accepted_len(&xor) {
        None => true,
        Some(len) => len > max_len,
    })
}

/// Length of the shortest accepted word, if any.
fn shortest_accepted_len(m: &Dfa) -> Option<usize> {
    let mut dist = vec![usize::MAX; m.state_count()];
    let mut queue = std::collections::VecDeque::new();
    dist[m.initial()] = 0;
    queue.push_back(m.initial());
    while let Some(q) = queue.pop_front() {
        if m.is_accepting(q) {
            return Some(dist[q]);
        }
        for sym in 0..m.alphabet_len() {
            let t = m.step(q, sym);
            if dist[t] == usize::MAX {
                dist[t] = dist[q] + 1;
                queue.push_back(t);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::print_term_expression;

    /// lsd-first acceptor of {3 * 2^n + 1 : n >= 1}.
    fn sample_lsd() -> Dfa {
        Dfa::from_parts(
            2,
            1,
            Direction::Lsd,
            0,
            vec![false, false, false, true, false],
            vec![4, 1, 1, 2, 4, 3, 4, 4, 4, 4],
        )
        .unwrap()
    }

    fn word(base: u32, digits: &str) -> DigitWord {
        DigitWord::from_coordinate_strings(base, &[digits]).unwrap()
    }

    #[test]
    fn sample_decomposes_into_one_term() {
        let terms = decompose(&sample_lsd()).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(print_term_expression(&terms[0]), "\"11\" (\"0\")* \"1\"");
    }

    #[test]
    fn sample_decomposition_verifies() {
        let terms = decompose(&sample_lsd()).unwrap();
        assert!(verify_decomposition(&sample_lsd(), &terms, 40).unwrap());
    }

    #[test]
    fn decompose_rejects_non_sparse() {
        let all = Dfa::from_parts(2, 1, Direction::Msd, 0, vec![true], vec![0, 0]).unwrap();
        match decompose(&all) {
            Err(Error::NotSparse { witness }) => {
                assert_ne!(witness.cycle_a, witness.cycle_b);
            }
            other => panic!("expected a non-sparse error, got {other:?}"),
        }
    }

    #[test]
    fn decompose_of_empty_language() {
        let terms = decompose(&Dfa::empty_language(2, 1, Direction::Msd).unwrap()).unwrap();
        assert!(terms.is_empty());
    }

    #[test]
    fn decompose_of_zero_only() {
        // Accepts only the empty word, so the set is {0}.
        let m = Dfa::from_parts(2, 1, Direction::Msd, 0, vec![true, false], vec![1, 1, 1, 1])
            .unwrap();
        let terms = decompose(&m).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].star_count(), 0);
        assert!(terms[0].prefix(0).is_empty());
    }

    #[test]
    fn instantiate_walks_the_term() {
        let t = SparseTerm::new(
            2,
            1,
            vec![word(2, "11"), word(2, "1")],
            vec![word(2, "0")],
        )
        .unwrap();
        assert_eq!(t.instantiate(&[0]).unwrap(), word(2, "111"));
        assert_eq!(t.instantiate(&[3]).unwrap(), word(2, "110001"));
        assert_eq!(t.evaluate(&[1]).unwrap(), vec![13u32.into()]);
        assert!(t.instantiate(&[1, 2]).is_err());
    }

    #[test]
    fn term_to_dfa_accepts_exactly_the_term() {
        let t = SparseTerm::new(
            2,
            1,
            vec![word(2, "11"), word(2, "1")],
            vec![word(2, "0")],
        )
        .unwrap();
        let d = term_to_dfa(&t).unwrap();
        assert_eq!(d.direction(), Direction::Msd);
        for n in 0..6 {
            assert!(d.accepts(&t.instantiate(&[n]).unwrap()).unwrap());
        }
        assert!(!d.accepts(&word(2, "11")).unwrap());
        assert!(!d.accepts(&word(2, "1011")).unwrap());
        assert!(!d.accepts(&word(2, "1100")).unwrap());
        // Same language as the source machine.
        assert!(d.isomorphic_to(&normalized_machine(&sample_lsd()).unwrap()));
    }

    #[test]
    fn nested_stars_get_degree_two() {
        // "1" "0"* "1" "0"* over base 2: states chain with two loops.
        let m = Dfa::from_parts(
            2,
            1,
            Direction::Msd,
            0,
            vec![false, false, true, false],
            // 0: 0->3, 1->1; 1: 0->1, 1->2; 2: 0->2, 1->3; 3 dead
            vec![3, 1, 1, 2, 2, 3, 3, 3],
        )
        .unwrap();
        let terms = decompose(&m).unwrap();
        assert!(terms.iter().any(|t| t.star_count() == 2));
        assert!(verify_decomposition(&m, &terms, 14).unwrap());
        let report = crate::sparsity::classify(&m).unwrap();
        assert_eq!(
            report.poly_degree.unwrap(),
            terms.iter().map(SparseTerm::star_count).max().unwrap()
        );
    }

    #[test]
    fn terms_partition_the_language() {
        // Any two distinct terms of a decomposition share no word.
        let m = Dfa::from_parts(
            2,
            1,
            Direction::Msd,
            0,
            vec![false, true, true, false],
            // 0: 0->3, 1->1; 1: 0->2, 1->1; 2: 0->3, 1->2; 3 dead
            vec![3, 1, 2, 1, 3, 2, 3, 3],
        )
        .unwrap();
        let terms = decompose(&m).unwrap();
        assert!(terms.len() >= 2);
        assert!(verify_decomposition(&m, &terms, 14).unwrap());
        for i in 0..terms.len() {
            for j in 0..i {
                let a = term_to_dfa(&terms[i]).unwrap();
                let b = term_to_dfa(&terms[j]).unwrap();
                let both = a.product(&b, |x, y| x && y).unwrap();
                assert_eq!(shortest_accepted_len(&both), None);
            }
        }
    }

    #[test]
    fn projection_of_terms_keeps_lengths() {
        let t = SparseTerm::new(
            2,
            2,
            vec![
                DigitWord::from_coordinate_strings(2, &["10", "11"]).unwrap(),
                DigitWord::empty(2, 2).unwrap(),
            ],
            vec![DigitWord::from_coordinate_strings(2, &["0", "1"]).unwrap()],
        )
        .unwrap();
        let p = t.project(&[2]).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.prefix(0), &word(2, "11"));
        assert_eq!(p.star(0), &word(2, "1"));
    }
}
