//! Plain-text exchange formats for automata and sparse terms.
//!
//! Automaton files (`.aut`) are line oriented:
//!
//! ```text
//! # comment
//! base 2
//! dim 1
//! states 5
//! initial 0
//! accepting 3
//! direction lsd
//! trans 0 1 1
//! trans 0 0 4
//! ...
//! ```
//!
//! Digit tuples in `trans` lines are comma separated (`trans 0 1,0 2` for
//! dimension 2). Every (state, symbol) pair must appear exactly once; the
//! transition function is total. `dim` defaults to 1 and `direction` to msd
//! when omitted.
//!
//! Term files (`.term`) carry `base` and `dim` headers followed by a single
//! expression line such as `"11" ("0")* "1"`. For dimension 1 and bases up
//! to 10 the symbols of a quoted block are single characters; otherwise
//! symbols are separated by spaces and their digits by commas, e.g.
//! `"1,0 1,1" ("0,1")* ""`.

use crate::decompose::SparseTerm;
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::words::{alphabet_size, symbol_index, DigitWord, Direction};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what}: {tok:?}")))
}

/// Parses the `.aut` format.
pub fn parse_aut(input: &str) -> Result<Dfa> {
    let mut base: Option<u32> = None;
    let mut dim: usize = 1;
    let mut states: Option<usize> = None;
    let mut initial: Option<usize> = None;
    let mut accepting: Option<Vec<usize>> = None;
    let mut direction = Direction::Msd;
    // (line, from, digits, to)
    let mut edges: Vec<(usize, usize, Vec<u32>, usize)> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let lno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap();
        let rest: Vec<&str> = toks.collect();
        match key {
            "base" | "dim" | "states" | "initial" | "direction" => {
                if rest.len() != 1 {
                    return Err(parse_err(lno, format!("{key} expects one value")));
                }
                match key {
                    "base" => base = Some(parse_num(lno, rest[0], "base")?),
                    "dim" => dim = parse_num(lno, rest[0], "dim")?,
                    "states" => states = Some(parse_num(lno, rest[0], "state count")?),
                    "initial" => initial = Some(parse_num(lno, rest[0], "initial state")?),
                    "direction" => {
                        direction = match rest[0] {
                            "msd" => Direction::Msd,
                            "lsd" => Direction::Lsd,
                            other => {
                                return Err(parse_err(lno, format!("unknown direction {other:?}")))
                            }
                        }
                    }
                    _ => unreachable!(),
                }
            }
            "accepting" => {
                let mut acc = Vec::new();
                for tok in rest {
                    acc.push(parse_num(lno, tok, "accepting state")?);
                }
                if accepting.is_some() {
                    return Err(parse_err(lno, "duplicate accepting line"));
                }
                accepting = Some(acc);
            }
            "trans" => {
                if rest.len() != 3 {
                    return Err(parse_err(lno, "trans expects: from digits to"));
                }
                let from = parse_num(lno, rest[0], "state")?;
                let to = parse_num(lno, rest[2], "state")?;
                let digits: Vec<u32> = rest[1]
                    .split(',')
                    .map(|d| parse_num(lno, d, "digit"))
                    .collect::<Result<_>>()?;
                edges.push((lno, from, digits, to));
            }
            other => return Err(parse_err(lno, format!("unknown directive {other:?}"))),
        }
    }

    let base = base.ok_or_else(|| parse_err(0, "missing base"))?;
    let states = states.ok_or_else(|| parse_err(0, "missing states"))?;
    let initial = initial.ok_or_else(|| parse_err(0, "missing initial"))?;
    let accepting = accepting.unwrap_or_default();
    let asize =
        alphabet_size(base, dim).map_err(|e| parse_err(0, e.to_string()))?;
    if states == 0 {
        return Err(parse_err(0, "states must be positive"));
    }
    if initial >= states {
        return Err(parse_err(0, "initial state out of range"));
    }
    let mut acc_flags = vec![false; states];
    for q in accepting {
        if q >= states {
            return Err(parse_err(0, format!("accepting state {q} out of range")));
        }
        acc_flags[q] = true;
    }
    let mut trans = vec![usize::MAX; states * asize];
    for (lno, from, digits, to) in edges {
        if from >= states || to >= states {
            return Err(parse_err(lno, "state index out of range"));
        }
        if digits.len() != dim {
            return Err(parse_err(lno, format!("expected {dim} digits")));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(parse_err(lno, format!("digit {d} out of range for base {base}")));
        }
        let sym = symbol_index(base, &digits);
        if trans[from * asize + sym] != usize::MAX {
            return Err(parse_err(lno, "duplicate transition"));
        }
        trans[from * asize + sym] = to;
    }
    if let Some(pos) = trans.iter().position(|&t| t == usize::MAX) {
        let (q, sym) = (pos / asize, pos % asize);
        let digits = crate::words::symbol_digits(base, dim, sym);
        let digits = digits
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",");
        return Err(parse_err(
            0,
            format!("missing transition from state {q} on {digits}"),
        ));
    }
    Dfa::from_parts(base, dim, direction, initial, acc_flags, trans)
        .map_err(|e| parse_err(0, e.to_string()))
}

/// Serializes an automaton in the `.aut` format.
pub fn print_aut(a: &Dfa) -> String {
    let mut out = String::new();
    out.push_str(&format!("base {}\n", a.base()));
    out.push_str(&format!("dim {}\n", a.dim()));
    out.push_str(&format!("states {}\n", a.state_count()));
    out.push_str(&format!("initial {}\n", a.initial()));
    let acc: Vec<String> = (0..a.state_count())
        .filter(|&q| a.is_accepting(q))
        .map(|q| q.to_string())
        .collect();
    out.push_str(&format!("accepting {}\n", acc.join(" ")));
    out.push_str(&format!("direction {}\n", a.direction()));
    for q in 0..a.state_count() {
        for sym in 0..a.alphabet_len() {
            let digits = crate::words::symbol_digits(a.base(), a.dim(), sym);
            let digits = digits
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!("trans {} {} {}\n", q, digits, a.step(q, sym)));
        }
    }
    out
}

/// Renders one quoted word block.
pub fn print_word(w: &DigitWord) -> String {
    let simple = w.dim() == 1 && w.base() <= 10;
    let body = if simple {
        w.symbols()
            .iter()
            .map(|s| s[0].to_string())
            .collect::<String>()
    } else {
        w.symbols()
            .iter()
            .map(|s| {
                s.iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!("\"{body}\"")
}

/// Renders a term expression such as `"11" ("0")* "1"`.
pub fn print_term_expression(t: &SparseTerm) -> String {
    let mut out = print_word(t.prefix(0));
    for i in 0..t.star_count() {
        out.push_str(&format!(
            " ({})* {}",
            print_word(t.star(i)),
            print_word(t.prefix(i + 1))
        ));
    }
    out
}

/// Serializes a term in the `.term` format.
pub fn print_term(t: &SparseTerm) -> String {
    format!(
        "base {}\ndim {}\n{}\n",
        t.base(),
        t.dim(),
        print_term_expression(t)
    )
}

fn parse_word_block(line: usize, base: u32, dim: usize, body: &str) -> Result<DigitWord> {
    let body = body.trim();
    if body.is_empty() {
        return DigitWord::empty(base, dim).map_err(|e| parse_err(line, e.to_string()));
    }
    let mut symbols: Vec<Vec<u32>> = Vec::new();
    if body.contains(' ') || body.contains(',') {
        for sym in body.split_whitespace() {
            let digits: Vec<u32> = sym
                .split(',')
                .map(|d| parse_num(line, d, "digit"))
                .collect::<Result<_>>()?;
            if digits.len() != dim {
                return Err(parse_err(line, format!("expected {dim} digits per symbol")));
            }
            symbols.push(digits);
        }
    } else {
        if dim != 1 {
            return Err(parse_err(line, "multi-digit symbols need commas"));
        }
        for ch in body.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| parse_err(line, format!("bad digit char {ch:?}")))?;
            symbols.push(vec![d]);
        }
    }
    DigitWord::new(base, dim, symbols).map_err(|e| parse_err(line, e.to_string()))
}

/// Parses a term expression line against a known base and dimension.
pub fn parse_term_expression(line: usize, base: u32, dim: usize, expr: &str) -> Result<SparseTerm> {
    // tokens: "word" or ("word")*
    let mut prefixes: Vec<DigitWord> = Vec::new();
    let mut stars: Vec<DigitWord> = Vec::new();
    let mut pending =
        DigitWord::empty(base, dim).map_err(|e| parse_err(line, e.to_string()))?;
    let mut rest = expr.trim();
    while !rest.is_empty() {
        if let Some(tail) = rest.strip_prefix('(') {
            let tail = tail.trim_start();
            let tail = tail
                .strip_prefix('"')
                .ok_or_else(|| parse_err(line, "expected quoted word after ("))?;
            let end = tail
                .find('"')
                .ok_or_else(|| parse_err(line, "unterminated quote"))?;
            let (body, tail) = tail.split_at(end);
            let tail = tail[1..].trim_start();
            let tail = tail
                .strip_prefix(')')
                .ok_or_else(|| parse_err(line, "expected ) after quoted word"))?;
            let tail = tail
                .strip_prefix('*')
                .ok_or_else(|| parse_err(line, "expected * after )"))?;
            let w = parse_word_block(line, base, dim, body)?;
            if w.is_empty() {
                return Err(parse_err(line, "starred word must be nonempty"));
            }
            prefixes.push(pending);
            stars.push(w);
            pending = DigitWord::empty(base, dim).map_err(|e| parse_err(line, e.to_string()))?;
            rest = tail.trim_start();
        } else if let Some(tail) = rest.strip_prefix('"') {
            let end = tail
                .find('"')
                .ok_or_else(|| parse_err(line, "unterminated quote"))?;
            let (body, tail) = tail.split_at(end);
            let w = parse_word_block(line, base, dim, body)?;
            pending = pending
                .concat(&w)
                .map_err(|e| parse_err(line, e.to_string()))?;
            rest = tail[1..].trim_start();
        } else {
            return Err(parse_err(line, format!("unexpected token near {rest:?}")));
        }
    }
    prefixes.push(pending);
    SparseTerm::new(base, dim, prefixes, stars).map_err(|e| parse_err(line, e.to_string()))
}

/// Parses the `.term` format: `base` and `dim` headers, one expression line.
pub fn parse_term(input: &str) -> Result<SparseTerm> {
    let mut base: Option<u32> = None;
    let mut dim: usize = 1;
    let mut term: Option<SparseTerm> = None;
    for (idx, raw) in input.lines().enumerate() {
        let lno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("base ") {
            base = Some(parse_num(lno, rest.trim(), "base")?);
        } else if let Some(rest) = line.strip_prefix("dim ") {
            dim = parse_num(lno, rest.trim(), "dim")?;
        } else {
            let b = base.ok_or_else(|| parse_err(lno, "base must come before the expression"))?;
            if term.is_some() {
                return Err(parse_err(lno, "multiple expression lines"));
            }
            term = Some(parse_term_expression(lno, b, dim, line)?);
        }
    }
    term.ok_or_else(|| parse_err(0, "missing term expression"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE_AUT: &str = "\
# lsd-first acceptor of 3*2^n+1, n >= 1
base 2
dim 1
states 5
initial 0
accepting 3
direction lsd
trans 0 1 1
trans 0 0 4
trans 1 0 1
trans 1 1 2
trans 2 1 3
trans 2 0 4
trans 3 0 4
trans 3 1 4
trans 4 0 4
trans 4 1 4
";

    #[test]
    fn parses_and_reprints_sample() {
        let a = parse_aut(SAMPLE_AUT).unwrap();
        assert_eq!(a.state_count(), 5);
        assert_eq!(a.direction(), Direction::Lsd);
        assert!(a.member(&[13u32.into()]).unwrap());
        assert!(!a.member(&[14u32.into()]).unwrap());
        let b = parse_aut(&print_aut(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_partial_transition_table() {
        let text = "base 2\nstates 2\ninitial 0\naccepting 1\ntrans 0 0 1\ntrans 0 1 1\ntrans 1 0 0\n";
        let err = parse_aut(text).unwrap_err();
        assert!(err.to_string().contains("missing transition"), "{err}");
    }

    #[test]
    fn rejects_duplicate_transition() {
        let text = "base 2\nstates 1\ninitial 0\naccepting\ntrans 0 0 0\ntrans 0 0 0\ntrans 0 1 0\n";
        let err = parse_aut(text).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn rejects_digit_out_of_range() {
        let text = "base 2\nstates 1\ninitial 0\naccepting\ntrans 0 2 0\ntrans 0 0 0\ntrans 0 1 0\n";
        assert!(parse_aut(text).is_err());
    }

    #[test]
    fn parses_dimension_two_transitions() {
        let text = "\
base 2
dim 2
states 2
initial 0
accepting 1
trans 0 0,0 0
trans 0 0,1 1
trans 0 1,0 1
trans 0 1,1 1
trans 1 0,0 1
trans 1 0,1 1
trans 1 1,0 1
trans 1 1,1 1
";
        let a = parse_aut(text).unwrap();
        assert_eq!(a.dim(), 2);
        assert!(a.member(&[1u32.into(), 0u32.into()]).unwrap());
        assert!(!a.member(&[0u32.into(), 0u32.into()]).unwrap());
    }

    #[test]
    fn term_round_trip_dim1() {
        let t = parse_term("base 2\ndim 1\n\"11\" (\"0\")* \"1\"\n").unwrap();
        assert_eq!(t.star_count(), 1);
        assert_eq!(print_term_expression(&t), "\"11\" (\"0\")* \"1\"");
        let again = parse_term(&print_term(&t)).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn term_round_trip_dim2() {
        let t = parse_term("base 2\ndim 2\n\"1,0 1,1\" (\"0,1\")* \"\"\n").unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(
            print_term_expression(&t),
            "\"1,0 1,1\" (\"0,1\")* \"\""
        );
        let again = parse_term(&print_term(&t)).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn term_rejects_empty_star() {
        assert!(parse_term("base 2\ndim 1\n\"1\" (\"\")* \"1\"\n").is_err());
    }

    #[test]
    fn term_without_stars() {
        let t = parse_term("base 3\ndim 1\n\"21\"\n").unwrap();
        assert_eq!(t.star_count(), 0);
        assert_eq!(print_term_expression(&t), "\"21\"");
    }
}
