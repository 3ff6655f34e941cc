//! Sparsity classification.
//!
//! A set is sparse when the number of members with representations of
//! length at most n grows polynomially in n; otherwise the count grows
//! exponentially. On the minimized acceptor of the canonical language the
//! distinction is structural: the set is sparse exactly when every useful
//! state has at most one outgoing transition that stays inside its strongly
//! connected component. A state with two such transitions yields two
//! distinct return cycles, which pump an exponential family of members.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::numeric::log2_biguint;
use crate::words::DigitWord;

/// Proof that a set is not sparse: two distinct words that each trace a
/// cycle from `state` back to itself in the normalized acceptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonSparseWitness {
    /// State of the normalized machine carrying both cycles.
    pub state: usize,
    pub cycle_a: DigitWord,
    pub cycle_b: DigitWord,
}

/// Outcome of [`classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityReport {
    pub is_sparse: bool,
    /// Present exactly when the set is not sparse.
    pub witness: Option<NonSparseWitness>,
    /// For sparse sets: the cumulative member count through length n is
    /// O(n^poly_degree).
    pub poly_degree: Option<usize>,
    /// For sparse sets: a constant c with
    /// `counts[n] <= c * (n + 1)^poly_degree` for every n.
    pub poly_bound_constant: Option<BigUint>,
    /// `counts[n]` = number of members whose canonical representation has
    /// length at most n.
    pub counts: Vec<BigUint>,
    /// Minimized msd-first acceptor of the canonical language; witness
    /// state indices refer to this machine.
    pub machine: Dfa,
}

/// Estimated growth of the cumulative member count.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthEstimate {
    /// Fitted exponent d of counts(n) ~ n^d.
    Polynomial { degree: f64 },
    /// Fitted base b of counts(n) ~ b^n.
    Exponential { ratio: f64 },
}

/// Structural analysis shared by classification and decomposition.
pub(crate) struct Analysis {
    /// Minimized msd-first acceptor of the canonical language.
    pub(crate) machine: Dfa,
    pub(crate) useful: Vec<bool>,
    /// Component id per state; `usize::MAX` on non-useful states.
    pub(crate) comp: Vec<usize>,
    pub(crate) comp_count: usize,
    /// Per component: whether it contains any internal edge.
    pub(crate) cyclic: Vec<bool>,
    pub(crate) witness: Option<NonSparseWitness>,
}

/// Minimized msd-first acceptor of the canonical language of `a`.
pub(crate) fn normalized_machine(a: &Dfa) -> Result<Dfa> {
    a.reverse_direction().canonical_restriction()
}

/// Strongly connected components of the subgraph induced by `active`,
/// via Kosaraju's two passes. Returns (component id per state, count);
/// inactive states get `usize::MAX`.
fn strongly_connected(m: &Dfa, active: &[bool]) -> (Vec<usize>, usize) {
    let n = m.state_count();
    let asize = m.alphabet_len();
    let succ = |q: usize| (0..asize).map(move |s| m.step(q, s));

    // Pass 1: finish order on the forward graph.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if !active[root] || seen[root] {
            continue;
        }
        // (state, next symbol index)
        let mut stack = vec![(root, 0usize)];
        seen[root] = true;
        while let Some(top) = stack.last_mut() {
            let (q, sym) = *top;
            if sym < asize {
                top.1 += 1;
                let t = m.step(q, sym);
                if active[t] && !seen[t] {
                    seen[t] = true;
                    stack.push((t, 0));
                }
            } else {
                order.push(q);
                stack.pop();
            }
        }
    }

    // Pass 2: reverse-graph sweeps in reverse finish order.
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    for q in 0..n {
        if !active[q] {
            continue;
        }
        for t in succ(q) {
            if active[t] {
                pred[t].push(q);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for &root in order.iter().rev() {
        if comp[root] != usize::MAX {
            continue;
        }
        let id = count;
        count += 1;
        let mut stack = vec![root];
        comp[root] = id;
        while let Some(q) = stack.pop() {
            for &p in &pred[q] {
                if comp[p] == usize::MAX {
                    comp[p] = id;
                    stack.push(p);
                }
            }
        }
    }
    (comp, count)
}

/// Shortest word leading from `from` to `to` while staying inside the
/// component of `to`.
fn word_within_component(m: &Dfa, comp: &[usize], from: usize, to: usize) -> Vec<usize> {
    if from == to {
        return Vec::new();
    }
    let n = m.state_count();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(from);
    while let Some(q) = queue.pop_front() {
        for sym in 0..m.alphabet_len() {
            let t = m.step(q, sym);
            if comp[t] != comp[to] || prev[t].is_some() || t == from {
                continue;
            }
            prev[t] = Some((q, sym));
            if t == to {
                let mut word = Vec::new();
                let mut cur = to;
                while cur != from {
                    let (p, s) = prev[cur].unwrap();
                    word.push(s);
                    cur = p;
                }
                word.reverse();
                return word;
            }
            queue.push_back(t);
        }
    }
    unreachable!("states in one strongly connected component are mutually reachable");
}

fn symbols_to_word(m: &Dfa, syms: &[usize]) -> DigitWord {
    let symbols = syms
        .iter()
        .map(|&s| crate::words::symbol_digits(m.base(), m.dim(), s))
        .collect();
    DigitWord::new(m.base(), m.dim(), symbols).expect("symbol indices are in range")
}

pub(crate) fn analyze(a: &Dfa) -> Result<Analysis> {
    let machine = normalized_machine(a)?;
    let useful = machine.useful_states();
    let (comp, comp_count) = strongly_connected(&machine, &useful);
    let asize = machine.alphabet_len();

    let mut cyclic = vec![false; comp_count];
    for q in 0..machine.state_count() {
        if !useful[q] {
            continue;
        }
        for sym in 0..asize {
            if comp[machine.step(q, sym)] == comp[q] {
                cyclic[comp[q]] = true;
            }
        }
    }

    let mut witness = None;
    'outer: for q in 0..machine.state_count() {
        if !useful[q] || !cyclic[comp[q]] {
            continue;
        }
        let internal: Vec<usize> = (0..asize)
            .filter(|&sym| comp[machine.step(q, sym)] == comp[q])
            .collect();
        if internal.len() >= 2 {
            let mut cycles = internal.iter().take(2).map(|&sym| {
                let mut syms = vec![sym];
                syms.extend(word_within_component(
                    &machine,
                    &comp,
                    machine.step(q, sym),
                    q,
                ));
                symbols_to_word(&machine, &syms)
            });
            witness = Some(NonSparseWitness {
                state: q,
                cycle_a: cycles.next().unwrap(),
                cycle_b: cycles.next().unwrap(),
            });
            break 'outer;
        }
    }

    Ok(Analysis {
        machine,
        useful,
        comp,
        comp_count,
        cyclic,
        witness,
    })
}

/// Number of accepted words of each length `0..=max_len` of `m`, taken
/// verbatim (no canonical restriction).
pub(crate) fn accepted_word_counts(m: &Dfa, max_len: usize) -> Vec<BigUint> {
    let n = m.state_count();
    let mut counts = Vec::with_capacity(max_len + 1);
    // weight[q] = number of words of the current length reaching q
    let mut weight = vec![BigUint::zero(); n];
    weight[m.initial()] = BigUint::one();
    for len in 0..=max_len {
        let total = (0..n)
            .filter(|&q| m.is_accepting(q))
            .map(|q| weight[q].clone())
            .sum();
        counts.push(total);
        if len == max_len {
            break;
        }
        let mut next = vec![BigUint::zero(); n];
        for q in 0..n {
            if weight[q].is_zero() {
                continue;
            }
            for sym in 0..m.alphabet_len() {
                let t = m.step(q, sym);
                next[t] += &weight[q];
            }
        }
        weight = next;
    }
    counts
}

/// Number of members of the set accepted by `a` whose canonical
/// representation has length exactly n, for n in `0..=max_len`.
pub fn member_counts(a: &Dfa, max_len: usize) -> Result<Vec<BigUint>> {
    let m = normalized_machine(a)?;
    Ok(accepted_word_counts(&m, max_len))
}

fn cumulative(per_len: &[BigUint]) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    per_len
        .iter()
        .map(|c| {
            acc += c;
            acc.clone()
        })
        .collect()
}

/// Maximum number of cyclic components on a condensation path from the
/// initial state's component to any accepting component.
fn polynomial_degree(an: &Analysis) -> usize {
    let m = &an.machine;
    if !an.useful[m.initial()] {
        return 0;
    }
    // Condensation edges, deduplicated.
    let mut edges: Vec<std::collections::BTreeSet<usize>> =
        vec![std::collections::BTreeSet::new(); an.comp_count];
    let mut indeg = vec![0usize; an.comp_count];
    for q in 0..m.state_count() {
        if !an.useful[q] {
            continue;
        }
        for sym in 0..m.alphabet_len() {
            let t = m.step(q, sym);
            if an.useful[t] && an.comp[q] != an.comp[t] && edges[an.comp[q]].insert(an.comp[t]) {
                indeg[an.comp[t]] += 1;
            }
        }
    }
    // Every useful state is reachable from the initial state, so every
    // component lies on some path from its component.
    let mut value: Vec<usize> = (0..an.comp_count)
        .map(|c| usize::from(an.cyclic[c]))
        .collect();
    let mut queue: std::collections::VecDeque<usize> = (0..an.comp_count)
        .filter(|&c| indeg[c] == 0)
        .collect();
    let mut topo = Vec::with_capacity(an.comp_count);
    while let Some(c) = queue.pop_front() {
        topo.push(c);
        for &t in &edges[c] {
            value[t] = value[t].max(value[c] + usize::from(an.cyclic[t]));
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push_back(t);
            }
        }
    }
    debug_assert_eq!(topo.len(), an.comp_count);
    (0..m.state_count())
        .filter(|&q| an.useful[q] && m.is_accepting(q))
        .map(|q| value[an.comp[q]])
        .max()
        .unwrap_or(0)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Classifies the set accepted by `a` as sparse or non-sparse.
///
/// The report's machine, witness and counts all refer to the canonical
/// language, so acceptors of the same set in either digit direction
/// classify identically. Counts run through length `max(20, 2|Q| + 2)`.
pub fn classify(a: &Dfa) -> Result<SparsityReport> {
    let an = analyze(a)?;
    let m = &an.machine;
    let max_len = 20.max(2 * m.state_count() + 2);
    let counts = cumulative(&accepted_word_counts(m, max_len));
    let (poly_degree, poly_bound_constant) = match an.witness {
        Some(_) => (None, None),
        None => {
            let degree = polynomial_degree(&an);
            let q = m.state_count();
            let n = BigUint::from(m.alphabet_len());
            // Bound on the number of simple sparse terms needed for this
            // machine; each term contributes at most (n+1)^degree words of
            // length <= n.
            let geom: BigUint = (0..q).map(|i| n.pow(i as u32)).sum();
            (Some(degree), Some(factorial(q.saturating_sub(1)) * geom))
        }
    };
    Ok(SparsityReport {
        is_sparse: an.witness.is_none(),
        witness: an.witness,
        poly_degree,
        poly_bound_constant,
        counts,
        machine: an.machine,
    })
}

/// Fits the growth of the cumulative member count over representation
/// lengths `0..=max_len` (at least 8): a log-log slope for sparse sets, a
/// per-length ratio for non-sparse ones.
pub fn growth_estimate(a: &Dfa, max_len: usize) -> Result<GrowthEstimate> {
    if max_len < 8 {
        return Err(Error::InvalidParameter(format!(
            "growth estimation needs max_len >= 8, got {max_len}"
        )));
    }
    let an = analyze(a)?;
    let counts = cumulative(&accepted_word_counts(&an.machine, max_len));
    let lo = max_len / 2;
    if an.witness.is_none() {
        // Least-squares slope of ln counts(n) against ln n over the upper
        // half of the window.
        let pts: Vec<(f64, f64)> = (lo.max(1)..=max_len)
            .filter(|&n| !counts[n].is_zero())
            .map(|n| ((n as f64).ln(), log2_biguint(&counts[n]) * std::f64::consts::LN_2))
            .collect();
        if pts.len() < 2 {
            return Ok(GrowthEstimate::Polynomial { degree: 0.0 });
        }
        let len = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let degree = if sxx == 0.0 { 0.0 } else { sxy / sxx };
        Ok(GrowthEstimate::Polynomial { degree })
    } else {
        let a = (lo..max_len)
            .find(|&n| !counts[n].is_zero())
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "no members with representations of length <= {max_len}"
                ))
            })?;
        let b = max_len;
        let la = log2_biguint(&counts[a]);
        let lb = log2_biguint(&counts[b]);
        let ratio = ((lb - la) / (b - a) as f64 * std::f64::consts::LN_2).exp();
        Ok(GrowthEstimate::Exponential { ratio })
    }
}
