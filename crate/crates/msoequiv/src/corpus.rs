//! Named transducers, grammars and domains used by the test suites and
//! the command-line self-test.

use std::collections::BTreeMap;

use crate::formulas::{Formula, Macro};
use crate::parikh::{ContextFreeGrammar, RegularTreeGrammar};
use crate::signature::{Signature, Symbol, HASH};
use crate::transducers::{marker_table, MsoTransducer, OutputClass, TransducerTable, VAR_X, VAR_Y};

fn string_table(
    delta: &[&str],
    copies: Vec<&str>,
    dom: Formula,
    nodes: Vec<(&str, Formula)>,
    edges: Vec<(&str, &str, &str, Formula)>,
) -> MsoTransducer {
    let mut node_formulas = BTreeMap::new();
    for (c, f) in nodes {
        node_formulas.insert((c.to_string(), HASH.to_string()), f);
    }
    let mut edge_formulas = BTreeMap::new();
    for (c, c2, g, f) in edges {
        edge_formulas.insert((c.to_string(), c2.to_string(), g.to_string()), f);
    }
    MsoTransducer::Table(TransducerTable {
        copies: copies.iter().map(|c| c.to_string()).collect(),
        params: Vec::new(),
        input_sig: Signature::string(delta),
        output_sig: Signature::string(delta),
        dom,
        node_formulas,
        edge_formulas,
        kind: OutputClass::StringGraph,
    })
}

/// The identity string transducer over `delta`.
pub fn identity(delta: &[&str]) -> MsoTransducer {
    string_table(
        delta,
        vec!["1"],
        Formula::True,
        vec![("1", Formula::True)],
        delta
            .iter()
            .map(|d| ("1", "1", *d, Formula::edge(d, VAR_X, VAR_Y)))
            .collect(),
    )
}

/// Reverses its input: edges flip direction.
pub fn reverse(delta: &[&str]) -> MsoTransducer {
    string_table(
        delta,
        vec!["1"],
        Formula::True,
        vec![("1", Formula::True)],
        delta
            .iter()
            .map(|d| ("1", "1", *d, Formula::edge(d, VAR_Y, VAR_X)))
            .collect(),
    )
}

/// Maps w to ww: copy 1 is the first half, copy 2 (all non-initial nodes)
/// the second, glued by an edge carrying the first letter.
pub fn copy_twice(delta: &[&str]) -> MsoTransducer {
    let any_in = Formula::exists(
        "z",
        Formula::disj(delta.iter().map(|d| Formula::edge(d, "z", VAR_X))),
    );
    let no_out = Formula::not(Formula::exists(
        "z",
        Formula::disj(delta.iter().map(|d| Formula::edge(d, VAR_X, "z"))),
    ));
    let mut edges: Vec<(&str, &str, &str, Formula)> = Vec::new();
    for d in delta {
        edges.push(("1", "1", d, Formula::edge(d, VAR_X, VAR_Y)));
        edges.push(("2", "2", d, Formula::edge(d, VAR_X, VAR_Y)));
        edges.push((
            "1",
            "2",
            d,
            Formula::and(
                no_out.clone(),
                Formula::exists(
                    "r",
                    Formula::and(
                        Formula::apply(Macro::Root, &["r"]),
                        Formula::edge(d, "r", VAR_Y),
                    ),
                ),
            ),
        ));
    }
    string_table(
        delta,
        vec!["1", "2"],
        Formula::True,
        vec![("1", Formula::True), ("2", any_in)],
        edges,
    )
}

/// Swaps the letters a and b.
pub fn label_swap() -> MsoTransducer {
    string_table(
        &["a", "b"],
        vec!["1"],
        Formula::True,
        vec![("1", Formula::True)],
        vec![
            ("1", "1", "a", Formula::edge("b", VAR_X, VAR_Y)),
            ("1", "1", "b", Formula::edge("a", VAR_X, VAR_Y)),
        ],
    )
}

/// Appends the fixed letter a to every output; together with the identity
/// this gives a pair whose outputs differ only by a proper prefix.
pub fn copy_then_a() -> MsoTransducer {
    MsoTransducer::Table(marker_table(
        &["a".to_string(), "b".to_string()],
        "a",
    ))
}

/// Identity restricted to inputs containing an a.
pub fn identity_if_has_a(delta: &[&str]) -> MsoTransducer {
    let dom = Formula::exists(
        "u",
        Formula::exists("v", Formula::edge("a", "u", "v")),
    );
    match identity(delta) {
        MsoTransducer::Table(mut t) => {
            t.dom = dom;
            MsoTransducer::Table(t)
        }
        _ => unreachable!(),
    }
}

fn tree_table(
    sig: &Signature,
    edges: Vec<(Symbol, Formula)>,
) -> MsoTransducer {
    let mut node_formulas = BTreeMap::new();
    for s in &sig.node_labels {
        node_formulas.insert(("1".to_string(), s.clone()), Formula::lab(s, VAR_X));
    }
    let mut edge_formulas = BTreeMap::new();
    for (g, f) in edges {
        edge_formulas.insert(("1".to_string(), "1".to_string(), g), f);
    }
    MsoTransducer::Table(TransducerTable {
        copies: vec!["1".to_string()],
        params: Vec::new(),
        input_sig: sig.clone(),
        output_sig: sig.clone(),
        dom: Formula::True,
        node_formulas,
        edge_formulas,
        kind: OutputClass::TreeGraph,
    })
}

/// The standard ranked signature used by the tree corpus.
pub fn tree_sig() -> Signature {
    Signature::tree(&[("f", 2), ("a", 0), ("b", 0)])
}

/// The identity tree transducer.
pub fn tree_identity(sig: &Signature) -> MsoTransducer {
    let edges = sig
        .edge_labels
        .iter()
        .map(|i| (i.clone(), Formula::edge(i, VAR_X, VAR_Y)))
        .collect();
    tree_table(sig, edges)
}

/// Swaps the two children of the root; identical below the root.
pub fn root_child_swap(sig: &Signature) -> MsoTransducer {
    let root = Formula::apply(Macro::Root, &[VAR_X]);
    let swap = |own: &str, other: &str| {
        Formula::or(
            Formula::and(root.clone(), Formula::edge(other, VAR_X, VAR_Y)),
            Formula::and(
                Formula::not(root.clone()),
                Formula::edge(own, VAR_X, VAR_Y),
            ),
        )
    };
    tree_table(
        sig,
        vec![
            ("1".to_string(), swap("1", "2")),
            ("2".to_string(), swap("2", "1")),
        ],
    )
}

/// (a|b)* as a context-free grammar.
pub fn sigma_star_cfg() -> ContextFreeGrammar {
    ContextFreeGrammar::parse("start: S\nS -> a S | b S | ε\n").unwrap()
}

/// Palindromes over {a,b}.
pub fn palindrome_cfg() -> ContextFreeGrammar {
    ContextFreeGrammar::parse("start: S\nS -> a S a | b S b | a | b | ε\n").unwrap()
}

/// a^n b^n.
pub fn anbn_cfg() -> ContextFreeGrammar {
    ContextFreeGrammar::parse("start: S\nS -> a S b | ε\n").unwrap()
}

/// Words starting with an a.
pub fn a_first_cfg() -> ContextFreeGrammar {
    ContextFreeGrammar::parse("start: S\nS -> a T\nT -> a T | b T | ε\n").unwrap()
}

/// All trees over f/2, a, b.
pub fn all_trees_rtg() -> RegularTreeGrammar {
    RegularTreeGrammar::parse("start: S\nS -> f(S,S) | a | b\n").unwrap()
}

/// Trees whose root children are equal subtrees (so swapping them at the
/// root changes nothing), plus the single-leaf trees. Tree grammars
/// derive siblings independently, so symmetry is enforced by giving each
/// child nonterminal exactly one derivable tree.
pub fn child_symmetric_rtg() -> RegularTreeGrammar {
    RegularTreeGrammar::parse(
        "start: S\nS -> a | b | f(A,A) | f(C,C)\nA -> a\nC -> f(A,A)\n",
    )
    .unwrap()
}

/// The deterministic string pairs exercised by the cross-validation
/// suite: (name, left, right, expected equivalent on (a|b)*).
pub fn string_pairs() -> Vec<(&'static str, MsoTransducer, MsoTransducer, bool)> {
    let d = &["a", "b"];
    vec![
        ("identity/identity", identity(d), identity(d), true),
        ("identity/reverse", identity(d), reverse(d), false),
        ("reverse/reverse", reverse(d), reverse(d), true),
        ("identity/label-swap", identity(d), label_swap(), false),
        ("label-swap/label-swap", label_swap(), label_swap(), true),
        ("identity/copy-twice", identity(d), copy_twice(d), false),
        ("copy-twice/copy-twice", copy_twice(d), copy_twice(d), true),
        ("identity/copy-then-a", identity(d), copy_then_a(), false),
        ("reverse/label-swap", reverse(d), label_swap(), false),
        (
            "identity/identity-if-has-a",
            identity(d),
            identity_if_has_a(d),
            false,
        ),
    ]
}
