//! The equivalence decision procedure for deterministic MSO string and
//! tree transducers restricted to a domain language.
//!
//! The procedure first decides whether the two domains agree inside the
//! domain language, by compiling the symmetric difference of the domain
//! formulas and testing emptiness against the domain. It then checks, for
//! every ordered pair of distinct output letters (with the end marker
//! included), whether some domain input makes the first output carry the
//! first letter and the second output the second letter at one shared
//! position: the positions pair into a semilinear subset of N^2 computed
//! through the counting construction, and the diagonal test settles the
//! pair. Any hit is a disequivalence with an abstract witness (a, b, n);
//! a bounded search then looks for a concrete input. If every pair comes
//! out empty the transducers are equivalent on the domain.

pub mod budget;
pub mod counting;
pub mod domain;
pub mod intersect;
pub mod witness;

use std::fmt;

use crate::compiler::{compile_tree, compile_word};
use crate::error::{CompileError, DecideError, GrammarError};
use crate::formulas::Formula;
use crate::parikh::{diagonal_nonempty, SemilinearSet};
use crate::signature::Symbol;
use crate::structures::Term;
use crate::transducers::{MsoTransducer, OutputClass, TransducerTable};

pub use budget::Budget;
pub use counting::{CountingAutomaton, PairLetter, Side};
pub use domain::{DomainDfa, DomainSpec};
pub use witness::{
    domain_members, domain_witness_valid, find_counterexample, outputs_differ, parse_input,
};

/// A concrete input: a word for string transducers, a term for tree
/// transducers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum InputValue {
    Word(Vec<Symbol>),
    Tree(Term),
}

impl fmt::Display for InputValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputValue::Word(w) if w.is_empty() => write!(f, "ε"),
            InputValue::Word(w) => write!(f, "{}", w.join("")),
            InputValue::Tree(t) => write!(f, "{t}"),
        }
    }
}

/// The decision outcome, with the machine-readable rendering used by the
/// command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    DomainMismatch {
        witness: Option<InputValue>,
    },
    OutputMismatch {
        a: Symbol,
        b: Symbol,
        n: u64,
        witness: Option<InputValue>,
    },
    ResourceExceeded {
        stage: String,
    },
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Equivalent => 0,
            Verdict::DomainMismatch { .. } | Verdict::OutputMismatch { .. } => 1,
            Verdict::ResourceExceeded { .. } => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent => write!(f, "EQUIVALENT"),
            Verdict::DomainMismatch { witness } => {
                write!(f, "INEQUIVALENT reason=domain-mismatch witness=")?;
                match witness {
                    Some(w) => write!(f, "{w}"),
                    None => write!(f, "none"),
                }
            }
            Verdict::OutputMismatch { a, b, n, witness } => {
                write!(
                    f,
                    "INEQUIVALENT reason=output-mismatch a={a} b={b} n={n} witness="
                )?;
                match witness {
                    Some(w) => write!(f, "{w}"),
                    None => write!(f, "none"),
                }
            }
            Verdict::ResourceExceeded { stage } => write!(f, "RESOURCE-EXCEEDED stage={stage}"),
        }
    }
}

/// Decide equivalence of two deterministic transducers restricted to the
/// domain. Resource exhaustion is a verdict, never a wrong answer.
pub fn decide(
    m1: &MsoTransducer,
    m2: &MsoTransducer,
    d: &DomainSpec,
    budget: &Budget,
) -> Result<Verdict, DecideError> {
    if !m1.is_deterministic() || !m2.is_deterministic() {
        return Err(DecideError::Nondeterministic);
    }
    let (t1, t2) = match (m1.as_table(), m2.as_table()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(DecideError::Unsupported(
                "the decision procedure works on plain transducer tables".into(),
            ))
        }
    };
    if t1.input_sig != t2.input_sig {
        return Err(DecideError::InputSignatureMismatch);
    }
    if t1.kind == OutputClass::DGraph || t2.kind == OutputClass::DGraph {
        return Err(DecideError::Unsupported(
            "outputs must be strings or trees".into(),
        ));
    }
    if t1.kind != t2.kind {
        return Err(DecideError::Unsupported(
            "output classes differ; a string and a tree are never equal".into(),
        ));
    }
    d.validate_against(&t1.input_sig)?;
    let deadline = budget.deadline();

    // Stage 1: the domains must agree inside D.
    match domains_agree(t1, t2, d, budget) {
        Ok(None) => {}
        Ok(Some(w)) => {
            let witness = if witness::domain_witness_valid(m1, m2, &w) {
                Some(w)
            } else {
                None
            };
            return Ok(Verdict::DomainMismatch { witness });
        }
        Err(e) => return Ok(resource_verdict(e, "domain agreement")?),
    }

    // Stage 2: the pair loop over distinct output letters plus the marker.
    let side1 = Side::new(t1, "xl");
    let side2 = Side::new(t2, "xr");
    let mut letters: Vec<Symbol> = side1.letters();
    for l in side2.letters() {
        if !letters.contains(&l) {
            letters.push(l.clone());
        }
    }
    letters.sort();
    let marker = fresh_marker(&letters);
    let mut pairs: Vec<(PairLetter, PairLetter)> = Vec::new();
    let mut all: Vec<PairLetter> = letters.iter().cloned().map(PairLetter::Sym).collect();
    all.push(PairLetter::Marker);
    for a in &all {
        for b in &all {
            if a != b {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    // lexicographic with marker pairs last
    pairs.sort_by_key(|(a, b)| {
        let key = |l: &PairLetter| match l {
            PairLetter::Sym(s) => (0, s.clone()),
            PairLetter::Marker => (1, marker.clone()),
        };
        (
            usize::from(matches!(a, PairLetter::Marker) || matches!(b, PairLetter::Marker)),
            key(a),
            key(b),
        )
    });

    for (a, b) in pairs {
        if std::time::Instant::now() > deadline {
            return Ok(Verdict::ResourceExceeded {
                stage: "pair loop deadline".into(),
            });
        }
        let s = match pair_parikh(&side1, &side2, &a, &b, d, budget) {
            Ok(s) => s,
            Err(e) => return Ok(resource_verdict(e, "pair image")?),
        };
        let n = diagonal_nonempty(&s).map_err(DecideError::Grammar)?;
        if let Some(n) = n {
            debug_assert!(n >= 1, "positions are 1-based");
            let witness = find_counterexample(m1, m2, d, budget.witness_bound)
                .filter(|w| outputs_differ(m1, m2, w));
            let name = |l: &PairLetter| match l {
                PairLetter::Sym(s) => s.clone(),
                PairLetter::Marker => marker.clone(),
            };
            return Ok(Verdict::OutputMismatch {
                a: name(&a),
                b: name(&b),
                n,
                witness,
            });
        }
    }
    Ok(Verdict::Equivalent)
}

/// Map resource-style errors to verdicts and pass the rest through.
fn resource_verdict(e: DecideError, stage: &str) -> Result<Verdict, DecideError> {
    match &e {
        DecideError::Compile(CompileError::StateCap { stage: s, .. }) => {
            Ok(Verdict::ResourceExceeded {
                stage: format!("{stage}: {s}"),
            })
        }
        DecideError::Grammar(GrammarError::Budget(s)) => Ok(Verdict::ResourceExceeded {
            stage: format!("{stage}: {s}"),
        }),
        _ => Err(e),
    }
}

fn fresh_marker(letters: &[Symbol]) -> Symbol {
    let mut m = "$".to_string();
    while letters.contains(&m) {
        m.push('\'');
    }
    m
}

/// Do the two domain formulas agree on every member of D? Returns a
/// shortest disagreeing member otherwise. The test compiles the symmetric
/// difference of the domain formulas and intersects with D; emptiness of
/// that language is exactly agreement.
pub fn domains_agree(
    t1: &TransducerTable,
    t2: &TransducerTable,
    d: &DomainSpec,
    budget: &Budget,
) -> Result<Option<InputValue>, DecideError> {
    let symdiff = Formula::not(Formula::iff(t1.dom.clone(), t2.dom.clone()));
    let cap = budget.automaton_states;
    match d {
        DomainSpec::Regex { dfa, .. } => {
            let a = compile_word(&symdiff, &vec![], &t1.input_sig, cap)?;
            let g = intersect::word_regular_grammar(&a, dfa);
            Ok(g.shortest_yield().map(|letters| {
                InputValue::Word(decode_word(&a.alphabet, &letters))
            }))
        }
        DomainSpec::Cfg(cfg) => {
            let a = compile_word(&symdiff, &vec![], &t1.input_sig, cap)?;
            let g = intersect::word_cfg_grammar(&a, cfg, budget.grammar_productions)
                .map_err(DecideError::Grammar)?;
            Ok(g.shortest_yield().map(|letters| {
                InputValue::Word(decode_word(&a.alphabet, &letters))
            }))
        }
        DomainSpec::Rtg(rtg) => {
            let a = compile_tree(&symdiff, &vec![], &t1.input_sig, cap)?;
            let g = intersect::tree_rtg_grammar(&a, rtg, budget.grammar_productions)
                .map_err(DecideError::Grammar)?;
            Ok(g.smallest_term(&a).map(InputValue::Tree))
        }
    }
}

fn decode_word(alpha: &crate::compiler::BitAlphabet, letters: &[u32]) -> Vec<Symbol> {
    let pad = alpha.base_index(crate::compiler::PAD).unwrap();
    letters
        .iter()
        .map(|&l| alpha.base_of(l as usize))
        .filter(|&b| b != pad)
        .map(|b| alpha.base[b].clone())
        .collect()
}

/// The Parikh image in N^2 of the pair set for letters (a,b): all
/// (n1, n2) such that some domain input in both domains has letter a at
/// output-1 position n1 and letter b at output-2 position n2. The end
/// marker is a valid letter on either side.
pub fn pair_parikh(
    side1: &Side,
    side2: &Side,
    a: &PairLetter,
    b: &PairLetter,
    d: &DomainSpec,
    budget: &Budget,
) -> Result<SemilinearSet, DecideError> {
    let tree_input = side1.table.input_sig.ranks.is_some();
    let limits = budget.engine_limits();
    let mut acc = SemilinearSet::empty(2);
    for c0_1 in &side1.table.copies {
        for c0_2 in &side2.table.copies {
            let ca = counting::counting_automaton(
                side1,
                side2,
                c0_1,
                c0_2,
                a,
                b,
                tree_input,
                budget.automaton_states,
            )?;
            let s = match (&ca, d) {
                (CountingAutomaton::Word(w, contrib), DomainSpec::Regex { dfa, .. }) => {
                    let g = intersect::word_regular_grammar(w, dfa);
                    intersect::grammar_parikh(&g, contrib, &limits).map_err(DecideError::Grammar)?
                }
                (CountingAutomaton::Word(w, contrib), DomainSpec::Cfg(cfg)) => {
                    let g = intersect::word_cfg_grammar(w, cfg, budget.grammar_productions)
                        .map_err(DecideError::Grammar)?;
                    intersect::grammar_parikh(&g, contrib, &limits).map_err(DecideError::Grammar)?
                }
                (CountingAutomaton::Tree(t, contrib), DomainSpec::Rtg(rtg)) => {
                    let g = intersect::tree_rtg_grammar(t, rtg, budget.grammar_productions)
                        .map_err(DecideError::Grammar)?;
                    intersect::tree_grammar_parikh(&g, contrib, &limits)
                        .map_err(DecideError::Grammar)?
                }
                _ => {
                    return Err(DecideError::DomainMismatch(
                        "domain shape does not match the input structure".into(),
                    ))
                }
            };
            acc = acc.union(&s).map_err(DecideError::Grammar)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests;
