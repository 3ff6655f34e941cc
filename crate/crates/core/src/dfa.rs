//! Deterministic automata over tuple-digit alphabets.
//!
//! A `Dfa` reads words over Sigma_k^d with a total transition function and
//! decides membership of d-tuples of naturals through their canonical base-k
//! expansions. Words are stored most significant digit first; an automaton
//! declared `Lsd` consumes the reversed expansion instead, and
//! [`Dfa::reverse_direction`] rebuilds it as an equivalent msd-first machine.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::words::{
    alphabet_size, expand, symbol_digits, symbol_index, DigitWord, Direction,
};

/// A complete DFA over the alphabet of base-k digit d-tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    base: u32,
    dim: usize,
    direction: Direction,
    initial: usize,
    accepting: Vec<bool>,
    // dense row-major table: trans[q * asize + sym]
    trans: Vec<usize>,
}

impl Dfa {
    /// Builds an automaton from a dense transition table, validating totality
    /// and index ranges. `trans` holds `states * base^dim` entries.
    pub fn from_parts(
        base: u32,
        dim: usize,
        direction: Direction,
        initial: usize,
        accepting: Vec<bool>,
        trans: Vec<usize>,
    ) -> Result<Self> {
        let asize = alphabet_size(base, dim)?;
        let states = accepting.len();
        if states == 0 {
            return Err(Error::InvalidParameter("automaton needs a state".into()));
        }
        if trans.len() != states * asize {
            return Err(Error::InvalidParameter(format!(
                "transition table has {} entries, expected {}",
                trans.len(),
                states * asize
            )));
        }
        if initial >= states || trans.iter().any(|&t| t >= states) {
            return Err(Error::InvalidParameter("state index out of range".into()));
        }
        Ok(Dfa {
            base,
            dim,
            direction,
            initial,
            accepting,
            trans,
        })
    }

    /// One-state automaton for the empty language.
    pub fn empty_language(base: u32, dim: usize, direction: Direction) -> Result<Self> {
        let asize = alphabet_size(base, dim)?;
        Dfa::from_parts(base, dim, direction, 0, vec![false], vec![0; asize])
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn alphabet_len(&self) -> usize {
        self.trans.len() / self.accepting.len()
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    /// Successor state under the symbol with dense index `sym`.
    pub fn step(&self, q: usize, sym: usize) -> usize {
        self.trans[q * self.alphabet_len() + sym]
    }

    fn check_word(&self, w: &DigitWord) -> Result<()> {
        if w.base() != self.base {
            return Err(Error::BaseMismatch {
                left: self.base,
                right: w.base(),
            });
        }
        if w.dim() != self.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: w.dim(),
            });
        }
        Ok(())
    }

    /// Runs the word as given, in the automaton's declared direction.
    pub fn accepts(&self, w: &DigitWord) -> Result<bool> {
        self.check_word(w)?;
        let mut q = self.initial;
        for i in 0..w.len() {
            q = self.step(q, w.symbol_index_at(i));
        }
        Ok(self.accepting[q])
    }

    /// Decides whether the tuple belongs to the represented set: the
    /// canonical expansion is computed, reversed for lsd-first automata, and
    /// run through the machine.
    pub fn member(&self, tuple: &[BigUint]) -> Result<bool> {
        if tuple.len() != self.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: tuple.len(),
            });
        }
        let w = expand(tuple, self.base)?;
        let w = match self.direction {
            Direction::Msd => w,
            Direction::Lsd => w.reversed(),
        };
        self.accepts(&w)
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let asize = self.alphabet_len();
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for sym in 0..asize {
                let t = self.step(q, sym);
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// States from which some accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let asize = self.alphabet_len();
        let n = self.state_count();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for sym in 0..asize {
                preds[self.step(q, sym)].push(q);
            }
        }
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&q| self.accepting[q]).collect();
        for &q in &queue {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen
    }

    /// States that are both reachable and co-reachable.
    pub fn useful_states(&self) -> Vec<bool> {
        let r = self.reachable();
        let c = self.coreachable();
        r.into_iter().zip(c).map(|(a, b)| a && b).collect()
    }

    pub fn useful_count(&self) -> usize {
        self.useful_states().iter().filter(|&&u| u).count()
    }

    /// Restricts to useful states, adding a single dead state when needed to
    /// keep the transition function total. Useful states come first in BFS
    /// order from the initial state; the dead state, if present, is last.
    pub fn trim(&self) -> Dfa {
        let asize = self.alphabet_len();
        let useful = self.useful_states();
        if !useful[self.initial] {
            // empty language
            return Dfa::empty_language(self.base, self.dim, self.direction)
                .expect("valid alphabet");
        }
        // BFS over the useful subgraph; paths to useful states stay useful
        let mut order = Vec::new();
        let mut map = vec![usize::MAX; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        map[self.initial] = 0;
        order.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for sym in 0..asize {
                let t = self.step(q, sym);
                if useful[t] && map[t] == usize::MAX {
                    map[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let n = order.len();
        let needs_dead = order
            .iter()
            .any(|&q| (0..asize).any(|sym| !useful[self.step(q, sym)]));
        let total = n + usize::from(needs_dead);
        let mut trans = vec![n; total * asize];
        let mut accepting = vec![false; total];
        for (new_q, &old_q) in order.iter().enumerate() {
            accepting[new_q] = self.accepting[old_q];
            for sym in 0..asize {
                let t = self.step(old_q, sym);
                trans[new_q * asize + sym] = if useful[t] { map[t] } else { n };
            }
        }
        if needs_dead {
            for sym in 0..asize {
                trans[n * asize + sym] = n;
            }
        }
        Dfa {
            base: self.base,
            dim: self.dim,
            direction: self.direction,
            initial: 0,
            accepting,
            trans,
        }
    }

    /// Renumbers states in BFS order from the initial state, visiting symbols
    /// in index order. All states must be reachable.
    fn renumber_bfs(&self) -> Dfa {
        let asize = self.alphabet_len();
        let mut map = vec![usize::MAX; self.state_count()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        map[self.initial] = 0;
        order.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for sym in 0..asize {
                let t = self.step(q, sym);
                if map[t] == usize::MAX {
                    map[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        debug_assert_eq!(order.len(), self.state_count());
        let mut trans = vec![0; self.trans.len()];
        let mut accepting = vec![false; self.state_count()];
        for (new_q, &old_q) in order.iter().enumerate() {
            accepting[new_q] = self.accepting[old_q];
            for sym in 0..asize {
                trans[new_q * asize + sym] = map[self.step(old_q, sym)];
            }
        }
        Dfa {
            base: self.base,
            dim: self.dim,
            direction: self.direction,
            initial: 0,
            accepting,
            trans,
        }
    }

    /// Canonical minimal automaton for the same word language: reachable
    /// restriction, partition refinement, quotient, BFS numbering. All states
    /// from which no accepting state is reachable collapse into one dead
    /// class, so the result is trim up to that single sink.
    pub fn minimize(&self) -> Dfa {
        let asize = self.alphabet_len();
        let reach = self.reachable();
        let keep: Vec<usize> = (0..self.state_count()).filter(|&q| reach[q]).collect();
        let mut map = vec![usize::MAX; self.state_count()];
        for (i, &q) in keep.iter().enumerate() {
            map[q] = i;
        }
        let n = keep.len();
        let step = |q: usize, sym: usize| map[self.step(keep[q], sym)];

        let mut class: Vec<usize> = keep
            .iter()
            .map(|&q| usize::from(self.accepting[q]))
            .collect();
        let mut count = class.iter().max().map_or(1, |m| m + 1);
        loop {
            let mut next_id: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next = vec![0usize; n];
            for q in 0..n {
                let sig = (
                    class[q],
                    (0..asize).map(|sym| class[step(q, sym)]).collect::<Vec<_>>(),
                );
                let fresh = next_id.len();
                next[q] = *next_id.entry(sig).or_insert(fresh);
            }
            let new_count = next_id.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        let mut rep = vec![usize::MAX; count];
        for q in 0..n {
            if rep[class[q]] == usize::MAX {
                rep[class[q]] = q;
            }
        }
        let mut trans = vec![0; count * asize];
        let mut accepting = vec![false; count];
        for c in 0..count {
            accepting[c] = self.accepting[keep[rep[c]]];
            for sym in 0..asize {
                trans[c * asize + sym] = class[step(rep[c], sym)];
            }
        }
        let quotient = Dfa {
            base: self.base,
            dim: self.dim,
            direction: self.direction,
            initial: class[map[self.initial]],
            accepting,
            trans,
        };
        quotient.renumber_bfs()
    }

    /// Msd-first automaton for the same set of tuples. Msd-first input is
    /// returned unchanged; lsd-first input is reversed (transition reversal,
    /// subset construction) and minimized.
    pub fn reverse_direction(&self) -> Dfa {
        if self.direction == Direction::Msd {
            return self.clone();
        }
        let asize = self.alphabet_len();
        let n = self.state_count();
        let mut nfa = Nfa::new(self.base, self.dim, n);
        for q in 0..n {
            for sym in 0..asize {
                nfa.add_edge(self.step(q, sym), sym, q);
            }
            if self.accepting[q] {
                nfa.initial.push(q);
            }
        }
        nfa.accepting[self.initial] = true;
        nfa.determinize(Direction::Msd).minimize()
    }

    /// Synchronous product; `op` combines acceptance of the two factors.
    /// Both automata must share base, dimension and direction.
    pub fn product(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        if self.base != other.base {
            return Err(Error::BaseMismatch {
                left: self.base,
                right: other.base,
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if self.direction != other.direction {
            return Err(Error::DirectionMismatch {
                required: "matching",
            });
        }
        let asize = self.alphabet_len();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        ids.insert(pairs[0], 0);
        let mut trans = Vec::new();
        let mut accepting = Vec::new();
        let mut next = 0;
        while next < pairs.len() {
            let (a, b) = pairs[next];
            accepting.push(op(self.accepting[a], other.accepting[b]));
            for sym in 0..asize {
                let t = (self.step(a, sym), other.step(b, sym));
                let fresh = ids.len();
                let id = *ids.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    fresh
                });
                trans.push(id);
            }
            next += 1;
        }
        Ok(Dfa {
            base: self.base,
            dim: self.dim,
            direction: self.direction,
            initial: 0,
            accepting,
            trans,
        })
    }

    /// Restricts the language to canonical expansions: the empty word plus
    /// all words whose first symbol is not the all-zero tuple. Membership is
    /// unchanged; words that merely carry redundant leading zeros are
    /// dropped. Requires msd-first input.
    pub fn canonical_restriction(&self) -> Result<Dfa> {
        if self.direction != Direction::Msd {
            return Err(Error::DirectionMismatch { required: "msd" });
        }
        let checker = canonical_checker(self.base, self.dim)?;
        Ok(self.product(&checker, |a, b| a && b)?.minimize())
    }

    /// Projection onto the 1-based coordinate set `coords`: the resulting
    /// automaton accepts exactly the canonical expansions of the projections
    /// of members. Leading zeros created by dropping coordinates are stripped
    /// by closing the initial state under symbols that project to the
    /// all-zero tuple before determinizing. Requires msd-first input.
    pub fn project(&self, coords: &[usize]) -> Result<Dfa> {
        if self.direction != Direction::Msd {
            return Err(Error::DirectionMismatch { required: "msd" });
        }
        let mut sel: Vec<usize> = coords.to_vec();
        sel.sort_unstable();
        sel.dedup();
        if sel.is_empty() {
            return Err(Error::InvalidParameter("empty coordinate set".into()));
        }
        if sel.iter().any(|&c| c == 0 || c > self.dim) {
            return Err(Error::InvalidParameter(format!(
                "coordinate out of range 1..={}",
                self.dim
            )));
        }
        let new_dim = sel.len();
        // Junk words with redundant leading zeros must not leak values into
        // the projection, so restrict to canonical expansions first.
        let a = self.canonical_restriction()?;
        let asize = a.alphabet_len();
        let n = a.state_count();

        let mut nfa = Nfa::new(self.base, new_dim, n);
        let mut zero_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for sym in 0..asize {
                let digits = symbol_digits(self.base, self.dim, sym);
                let proj: Vec<u32> = sel.iter().map(|&c| digits[c - 1]).collect();
                let psym = symbol_index(self.base, &proj);
                nfa.add_edge(q, psym, a.step(q, sym));
                if proj.iter().all(|&d| d == 0) {
                    zero_edges[q].push(a.step(q, sym));
                }
            }
            nfa.accepting[q] = a.is_accepting(q);
        }
        // initial closure under symbols whose projection is all zeros
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([a.initial()]);
        seen[a.initial()] = true;
        while let Some(q) = queue.pop_front() {
            for &t in &zero_edges[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        nfa.initial = (0..n).filter(|&q| seen[q]).collect();

        let det = nfa.determinize(Direction::Msd);
        let checker = canonical_checker(self.base, new_dim)?;
        Ok(det.product(&checker, |x, y| x && y)?.minimize())
    }

    /// Structural equality up to a BFS renaming of states. Both automata must
    /// have every state reachable for the pairing to be exhaustive.
    pub fn isomorphic_to(&self, other: &Dfa) -> bool {
        if self.base != other.base
            || self.dim != other.dim
            || self.direction != other.direction
            || self.state_count() != other.state_count()
        {
            return false;
        }
        let asize = self.alphabet_len();
        let mut map = vec![usize::MAX; self.state_count()];
        let mut hit = vec![false; other.state_count()];
        map[self.initial] = other.initial;
        hit[other.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        let mut seen = 1usize;
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] != other.accepting[map[q]] {
                return false;
            }
            for sym in 0..asize {
                let (t, u) = (self.step(q, sym), other.step(map[q], sym));
                if map[t] == usize::MAX {
                    if hit[u] {
                        return false;
                    }
                    map[t] = u;
                    hit[u] = true;
                    seen += 1;
                    queue.push_back(t);
                } else if map[t] != u {
                    return false;
                }
            }
        }
        seen == self.state_count()
    }
}

/// Three-state acceptor of canonical expansions: the empty word, or any word
/// whose first symbol is not the all-zero tuple.
fn canonical_checker(base: u32, dim: usize) -> Result<Dfa> {
    let asize = alphabet_size(base, dim)?;
    // 0: start (accepting, empty word), 1: valid body, 2: dead
    let mut trans = vec![0; 3 * asize];
    for sym in 0..asize {
        trans[sym] = if sym == 0 { 2 } else { 1 };
        trans[asize + sym] = 1;
        trans[2 * asize + sym] = 2;
    }
    Dfa::from_parts(base, dim, Direction::Msd, 0, vec![true, true, false], trans)
}

/// Nondeterministic automaton with epsilon moves; the workhorse behind
/// direction reversal, projection and term compilation.
#[derive(Debug, Clone)]
pub(crate) struct Nfa {
    pub base: u32,
    pub dim: usize,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
    pub eps: Vec<Vec<usize>>,
    // trans[q][sym] -> successor list
    pub trans: Vec<Vec<Vec<usize>>>,
}

impl Nfa {
    pub fn new(base: u32, dim: usize, states: usize) -> Nfa {
        let asize = alphabet_size(base, dim).expect("valid alphabet");
        Nfa {
            base,
            dim,
            initial: Vec::new(),
            accepting: vec![false; states],
            eps: vec![Vec::new(); states],
            trans: vec![vec![Vec::new(); asize]; states],
        }
    }

    pub fn add_state(&mut self) -> usize {
        let asize = self.trans.first().map_or_else(
            || alphabet_size(self.base, self.dim).expect("valid alphabet"),
            Vec::len,
        );
        self.accepting.push(false);
        self.eps.push(Vec::new());
        self.trans.push(vec![Vec::new(); asize]);
        self.accepting.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, sym: usize, to: usize) {
        self.trans[from][sym].push(to);
    }

    fn closure(&self, set: &mut Vec<usize>) {
        let mut seen = vec![false; self.accepting.len()];
        let mut queue: VecDeque<usize> = set.iter().copied().collect();
        for &q in set.iter() {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &t in &self.eps[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        *set = (0..self.accepting.len()).filter(|&q| seen[q]).collect();
    }

    /// Subset construction. The empty subset is the dead state, so the
    /// output is total; it is not minimized here.
    pub fn determinize(&self, direction: Direction) -> Dfa {
        let asize = alphabet_size(self.base, self.dim).expect("valid alphabet");
        let mut start = self.initial.clone();
        start.sort_unstable();
        start.dedup();
        self.closure(&mut start);

        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets = vec![start];
        ids.insert(subsets[0].clone(), 0);
        let mut trans = Vec::new();
        let mut accepting = Vec::new();
        let mut next = 0;
        while next < subsets.len() {
            let cur = subsets[next].clone();
            accepting.push(cur.iter().any(|&q| self.accepting[q]));
            for sym in 0..asize {
                let mut tgt: Vec<usize> = cur
                    .iter()
                    .flat_map(|&q| self.trans[q][sym].iter().copied())
                    .collect();
                tgt.sort_unstable();
                tgt.dedup();
                self.closure(&mut tgt);
                let fresh = ids.len();
                let id = *ids.entry(tgt.clone()).or_insert_with(|| {
                    subsets.push(tgt);
                    fresh
                });
                trans.push(id);
            }
            next += 1;
        }
        Dfa {
            base: self.base,
            dim: self.dim,
            direction,
            initial: 0,
            accepting,
            trans,
        }
    }
}
