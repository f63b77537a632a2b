//! Concrete counterexample extraction: enumerate domain members by size
//! and return the first input on which the two transducers differ.

use crate::oracle;
use crate::structures::{string_to_graph, tree_to_graph, Graph, Term};
use crate::transducers::{evaluate, MsoTransducer};

use super::domain::DomainSpec;
use super::InputValue;

/// Domain members in increasing size, up to the bound (word length or
/// tree node count).
pub fn domain_members(d: &DomainSpec, bound: usize) -> Vec<InputValue> {
    match d {
        DomainSpec::Regex { alphabet, dfa } => oracle::words(alphabet, bound)
            .into_iter()
            .filter(|w| dfa.accepts(w))
            .map(InputValue::Word)
            .collect(),
        DomainSpec::Cfg(g) => {
            let mut words: Vec<Vec<_>> = oracle::cfg_language(g, bound).into_iter().collect();
            words.sort_by_key(|w| w.len());
            words.into_iter().map(InputValue::Word).collect()
        }
        DomainSpec::Rtg(t) => oracle::rtg_language(t, bound)
            .into_iter()
            .map(InputValue::Tree)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect(),
    }
}

/// Encode a domain member as the input graph of the transducers.
pub fn member_graph(m: &MsoTransducer, v: &InputValue) -> Option<Graph> {
    match v {
        InputValue::Word(w) => {
            string_to_graph(w, &m.input_sig().edge_labels).ok()
        }
        InputValue::Tree(t) => {
            let ranks = m.input_sig().ranks.as_ref()?;
            tree_to_graph(t, ranks).ok()
        }
    }
}

/// Canonical forms of a transducer's outputs on one input: words print as
/// words, trees as terms, dgraphs as sorted label multisets. Comparing
/// canonical forms is equality up to the isomorphism the class admits.
pub fn canonical_outputs(m: &MsoTransducer, g: &Graph) -> Option<Vec<String>> {
    let outs = evaluate(m, g).ok()?;
    let mut keys: Vec<String> = outs.iter().map(|h| canonical_key(m, h)).collect();
    keys.sort();
    Some(keys)
}

fn canonical_key(m: &MsoTransducer, h: &Graph) -> String {
    use crate::transducers::OutputClass;
    match m.output_class() {
        OutputClass::StringGraph => match crate::structures::graph_to_string(h) {
            Ok(w) => format!("w:{}", w.join(" ")),
            Err(_) => format!("g:{h:?}"),
        },
        OutputClass::TreeGraph => match m
            .output_sig()
            .ranks
            .as_ref()
            .and_then(|r| crate::structures::graph_to_tree(h, r).ok())
        {
            Some(t) => format!("t:{t}"),
            None => format!("g:{h:?}"),
        },
        OutputClass::DGraph => format!("d:{:?}", h.sorted_labels()),
    }
}

/// Outputs differ (including defined-versus-undefined) on this input?
pub fn outputs_differ(m1: &MsoTransducer, m2: &MsoTransducer, v: &InputValue) -> bool {
    let g = match member_graph(m1, v) {
        Some(g) => g,
        None => return false,
    };
    match (canonical_outputs(m1, &g), canonical_outputs(m2, &g)) {
        (Some(a), Some(b)) => a != b,
        _ => false,
    }
}

/// First domain member on which the transducers disagree; none if the
/// bound is exhausted (the abstract witness still stands).
pub fn find_counterexample(
    m1: &MsoTransducer,
    m2: &MsoTransducer,
    d: &DomainSpec,
    bound: usize,
) -> Option<InputValue> {
    let mut members = domain_members(d, bound);
    members.sort_by_key(|v| match v {
        InputValue::Word(w) => w.len(),
        InputValue::Tree(t) => t.node_count(),
    });
    members.into_iter().find(|v| outputs_differ(m1, m2, v))
}

/// A domain member where exactly one transducer is defined; used to
/// validate domain-mismatch witnesses.
pub fn domain_witness_valid(m1: &MsoTransducer, m2: &MsoTransducer, v: &InputValue) -> bool {
    let g = match member_graph(m1, v) {
        Some(g) => g,
        None => return false,
    };
    match (evaluate(m1, &g), evaluate(m2, &g)) {
        (Ok(a), Ok(b)) => a.is_empty() != b.is_empty(),
        _ => false,
    }
}

/// Parse helper shared by the CLI: a term for tree domains, a word
/// otherwise.
pub fn parse_input(text: &str, tree: bool) -> Result<InputValue, String> {
    if tree {
        Term::parse(text)
            .map(InputValue::Tree)
            .map_err(|e| e.to_string())
    } else {
        let symbols: Vec<String> = text
            .trim()
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_string())
            .collect();
        Ok(InputValue::Word(symbols))
    }
}
