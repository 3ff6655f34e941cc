//! Command-line front end: every pipeline stage as one verb with stable,
//! scriptable output. Results go to stdout, errors to stderr; exit code 0
//! on success, 1 when the input is rejected on domain grounds (a
//! non-sparse machine, dependent bases), 2 on parse or usage errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use autosparse::{
    bounded_intersection, classify, decompose, degenerate_pair_bound, intersection_bound,
    member_counts, nondegenerate_pair_bound, parse_aut, parse_term, print_aut,
    print_term_expression, print_word, solution_count_bound, term_pair_bound, to_expsum,
    verify_decomposition, BoundValue, Dfa, Direction, Error, Exhaustiveness, FormulaId,
};

#[derive(Parser)]
#[command(name = "autosparse", version, about = "Analyze k-automatic sets")]
struct Cli {
    /// Keep lsd-first automata as loaded instead of normalizing to
    /// msd-first.
    #[arg(long, global = true)]
    keep_direction: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test whether a tuple belongs to an automaton's set.
    Member {
        aut: PathBuf,
        /// Comma-separated decimal coordinates, e.g. `66,6`.
        tuple: String,
    },
    /// Classify an automaton's set as sparse or non-sparse.
    Sparsity { aut: PathBuf },
    /// Cumulative member counts by canonical representation length.
    Counts {
        aut: PathBuf,
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
    /// Split a sparse set into simple terms.
    Decompose {
        aut: PathBuf,
        /// Cross-check the terms against the machine on all words up to
        /// this length.
        #[arg(long)]
        verify: Option<usize>,
    },
    /// Closed form of a term's values as exponential sums.
    Expsum { term: PathBuf },
    /// List a term's value tuples with coordinate sum at most the bound.
    Enumerate {
        term: PathBuf,
        #[arg(long)]
        bound: String,
    },
    /// Evaluate a counting bound formula.
    Bound {
        /// One of unit-eq, pair-nondeg, pair-deg, term-pair, main.
        #[arg(long)]
        formula: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long = "Q")]
        q: Option<u64>,
        #[arg(long = "Qp")]
        qp: Option<u64>,
        /// Also print the exact value when it fits under the bit cap.
        #[arg(long)]
        exact: bool,
    },
    /// Enumerate members common to two automatic sets up to a bound.
    Intersect {
        x: PathBuf,
        y: PathBuf,
        /// Largest coordinate sum searched, decimal.
        #[arg(long)]
        bound: String,
        /// Print the power equation and vanishing partition behind each
        /// witness (dimension 1 only).
        #[arg(long)]
        diagnostics: bool,
    },
    /// Project an automaton's set onto a subset of coordinates.
    Project {
        aut: PathBuf,
        /// Comma-separated 1-based coordinates, e.g. `1,3`.
        #[arg(long)]
        coords: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

enum Failure {
    /// Malformed arguments or unreadable files.
    Usage(String),
    /// The library rejected the input.
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let mut out = String::new();
    match &cli.cmd {
        Cmd::Member { aut, tuple } => {
            let a = load_aut(aut, cli.keep_direction)?;
            let t = parse_tuple(tuple)?;
            writeln!(out, "{}", a.member(&t)?).unwrap();
        }
        Cmd::Sparsity { aut } => {
            let a = load_aut(aut, cli.keep_direction)?;
            let report = classify(&a)?;
            match report.witness {
                None => {
                    writeln!(out, "sparse degree={}", report.poly_degree.unwrap_or(0)).unwrap()
                }
                Some(w) => writeln!(
                    out,
                    "non-sparse state={} cycle-a={} cycle-b={}",
                    w.state,
                    print_word(&w.cycle_a),
                    print_word(&w.cycle_b)
                )
                .unwrap(),
            }
        }
        Cmd::Counts { aut, max_len } => {
            let a = load_aut(aut, cli.keep_direction)?;
            for (n, c) in member_counts(&a, *max_len)?.iter().enumerate() {
                writeln!(out, "{n} {c}").unwrap();
            }
        }
        Cmd::Decompose { aut, verify } => {
            let a = load_aut(aut, cli.keep_direction)?;
            let terms = decompose(&a)?;
            for t in &terms {
                writeln!(out, "{}", print_term_expression(t)).unwrap();
            }
            if let Some(max_len) = verify {
                if !verify_decomposition(&a, &terms, *max_len)? {
                    return Err(Failure::Domain(Error::FormsDisagree {
                        x: "machine language".into(),
                        y: "decomposition".into(),
                    }));
                }
                writeln!(out, "verified max-len={max_len}").unwrap();
            }
        }
        Cmd::Expsum { term } => {
            let t = load_term(term)?;
            writeln!(out, "{}", to_expsum(&t)).unwrap();
        }
        Cmd::Enumerate { term, bound } => {
            let t = load_term(term)?;
            let bound = parse_nat(bound)?;
            for v in to_expsum(&t).enumerate_values(&bound)? {
                writeln!(out, "{}", join_tuple(&v)).unwrap();
            }
        }
        Cmd::Bound {
            formula,
            n,
            m,
            r,
            s,
            t,
            k,
            l,
            d,
            q,
            qp,
            exact,
        } => {
            let id = FormulaId::from_str(formula)?;
            let value = match id {
                FormulaId::UnitEquation => {
                    solution_count_bound(need("n", *n)?, need("r", *r)?)?
                }
                FormulaId::NondegeneratePair => {
                    nondegenerate_pair_bound(need("n", *n)?, need("m", *m)?)?
                }
                FormulaId::DegeneratePair => {
                    degenerate_pair_bound(need("n", *n)?, need("m", *m)?)?
                }
                FormulaId::TermPair => term_pair_bound(need("s", *s)?, need("t", *t)?)?,
                FormulaId::Intersection => intersection_bound(
                    need("k", *k)?,
                    need("l", *l)?,
                    need("d", *d)?,
                    need("Q", *q)?,
                    need("Qp", *qp)?,
                )?,
            };
            out.push_str(&render_bound(&value, *exact));
        }
        Cmd::Intersect {
            x,
            y,
            bound,
            diagnostics,
        } => {
            let mx = load_aut(x, cli.keep_direction)?;
            let my = load_aut(y, cli.keep_direction)?;
            let bound = parse_nat(bound)?;
            let r = bounded_intersection(&mx, &my, &bound, *diagnostics)?;
            for w in &r.witnesses {
                writeln!(out, "{}", join_tuple(w)).unwrap();
            }
            match &r.exhaustive {
                Exhaustiveness::UpTo(b) => writeln!(out, "exhaustive up-to {b}").unwrap(),
                Exhaustiveness::UnboundedExact => writeln!(out, "exhaustive unbounded").unwrap(),
            }
            if let Some(b) = &r.count_bound {
                writeln!(out, "count-bound log10={:.6}", b.log10).unwrap();
            }
            if let Some(eqs) = &r.per_witness {
                for eq in eqs {
                    writeln!(
                        out,
                        "witness {}: {} partition={:?}",
                        join_tuple(&eq.value),
                        eq,
                        eq.partition
                    )
                    .unwrap();
                }
            }
        }
        Cmd::Project { aut, coords } => {
            let a = load_aut(aut, cli.keep_direction)?;
            let coords: Vec<usize> = coords
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<usize>()
                        .map_err(|_| Failure::Usage(format!("bad coordinate {c:?}")))
                })
                .collect::<Result<_, _>>()?;
            out.push_str(&print_aut(&a.project(&coords)?));
        }
    }
    Ok(out)
}

fn load_aut(path: &Path, keep_direction: bool) -> Result<Dfa, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let a = parse_aut(&text)?;
    Ok(if !keep_direction && a.direction() == Direction::Lsd {
        a.reverse_direction()
    } else {
        a
    })
}

fn load_term(path: &Path) -> Result<autosparse::SparseTerm, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_term(&text)?)
}

fn parse_tuple(s: &str) -> Result<Vec<BigUint>, Failure> {
    s.split(',').map(|c| parse_nat(c)).collect()
}

fn parse_nat(s: &str) -> Result<BigUint, Failure> {
    BigUint::from_str(s.trim()).map_err(|_| Failure::Usage(format!("bad natural number {s:?}")))
}

fn join_tuple(v: &[BigUint]) -> String {
    v.iter()
        .map(BigUint::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn need(name: &str, v: Option<u64>) -> Result<u64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("formula requires --{name}")))
}

fn render_bound(b: &BoundValue, with_exact: bool) -> String {
    let inputs = b
        .inputs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    let mut out = format!("formula={} {inputs}\nlog10={:.6}\n", b.formula, b.log10);
    if with_exact {
        match &b.exact {
            Some(x) if x.is_integer() => {
                let _ = writeln!(out, "exact={}", x.to_integer());
            }
            Some(x) => {
                let _ = writeln!(out, "exact={}/{}", x.numer(), x.denom());
            }
            None => out.push_str("exact=over-cap\n"),
        }
    }
    out
}
