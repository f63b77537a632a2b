//! Independent brute-force oracles: bounded enumeration of words, trees
//! and grammar languages. These deliberately avoid the automaton and
//! semilinear machinery so that tests and the self-test suites can
//! cross-check the production paths against first principles.

use std::collections::BTreeSet;

use crate::parikh::grammar::{ContextFreeGrammar, GSym, RegularTreeGrammar};
use crate::signature::{Signature, Symbol};
use crate::structures::Term;

/// All words over `alphabet` with length at most `max_len`, shortest
/// first.
pub fn words(alphabet: &[Symbol], max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut w2 = w.clone();
                w2.push(a.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All terms over the ranked signature with at most `max_nodes` nodes,
/// smallest first.
pub fn trees(sig: &Signature, max_nodes: usize) -> Vec<Term> {
    let ranks = match &sig.ranks {
        Some(r) => r,
        None => return Vec::new(),
    };
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_nodes + 1];
    for size in 1..=max_nodes {
        let mut layer = Vec::new();
        for sym in &sig.node_labels {
            let k = ranks[sym];
            if k == 0 {
                if size == 1 {
                    layer.push(Term::leaf(sym));
                }
                continue;
            }
            // distribute size-1 nodes over k children
            let mut stack: Vec<(usize, usize, Vec<Term>)> = vec![(0, size - 1, Vec::new())];
            while let Some((child, left, partial)) = stack.pop() {
                if child == k {
                    if left == 0 {
                        layer.push(Term::new(sym, partial));
                    }
                    continue;
                }
                let remaining_children = k - child - 1;
                for csize in 1..=left.saturating_sub(remaining_children) {
                    for t in &by_size[csize] {
                        let mut p2 = partial.clone();
                        p2.push(t.clone());
                        stack.push((child + 1, left - csize, p2));
                    }
                }
            }
        }
        by_size[size] = layer;
    }
    by_size.into_iter().flatten().collect()
}

/// The language of a context-free grammar up to a length bound, by
/// saturating derivation sets.
pub fn cfg_language(g: &ContextFreeGrammar, max_len: usize) -> BTreeSet<Vec<Symbol>> {
    let n = g.nonterminals.len();
    let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); n];
    loop {
        let mut changed = false;
        for (lhs, rhs) in &g.productions {
            for w in expand(rhs, &sets, max_len) {
                changed |= sets[*lhs].insert(w);
            }
        }
        if !changed {
            break;
        }
    }
    sets[g.start]
        .iter()
        .map(|w| w.iter().map(|&t| g.terminals[t].clone()).collect())
        .collect()
}

fn expand(rhs: &[GSym], sets: &[BTreeSet<Vec<usize>>], budget: usize) -> Vec<Vec<usize>> {
    match rhs.split_first() {
        None => vec![Vec::new()],
        Some((GSym::T(t), rest)) => {
            if budget == 0 {
                return Vec::new();
            }
            expand(rest, sets, budget - 1)
                .into_iter()
                .map(|mut w| {
                    w.insert(0, *t);
                    w
                })
                .collect()
        }
        Some((GSym::N(i), rest)) => {
            let mut out = Vec::new();
            for w in &sets[*i] {
                if w.len() > budget {
                    continue;
                }
                for tail in expand(rest, sets, budget - w.len()) {
                    let mut full = w.clone();
                    full.extend(tail);
                    out.push(full);
                }
            }
            out
        }
    }
}

/// The tree language of a regular tree grammar up to a node bound.
pub fn rtg_language(g: &RegularTreeGrammar, max_nodes: usize) -> BTreeSet<Term> {
    let n = g.nonterminals.len();
    let mut sets: Vec<BTreeSet<Term>> = vec![BTreeSet::new(); n];
    loop {
        let mut changed = false;
        for (lhs, sym, children) in &g.productions {
            // all child combinations within the node budget
            let mut partials: Vec<(Vec<Term>, usize)> = vec![(Vec::new(), 1)];
            for &c in children {
                let mut next = Vec::new();
                for (partial, used) in &partials {
                    for t in &sets[c] {
                        let total = used + t.node_count();
                        if total <= max_nodes {
                            let mut p2 = partial.clone();
                            p2.push(t.clone());
                            next.push((p2, total));
                        }
                    }
                }
                partials = next;
            }
            for (children, _) in partials {
                changed |= sets[*lhs].insert(Term::new(sym, children));
            }
        }
        if !changed {
            break;
        }
    }
    sets[g.start].clone()
}

/// Parikh vector of a word as raw counts over the grammar's terminal
/// ordering.
pub fn counts_of(word: &[Symbol], terminals: &[Symbol]) -> Vec<u64> {
    let mut v = vec![0u64; terminals.len()];
    for a in word {
        if let Some(i) = terminals.iter().position(|t| t == a) {
            v[i] += 1;
        }
    }
    v
}

/// All derivable Parikh vectors with every component at most `cap`, by a
/// fixpoint over per-nonterminal vector sets. Pruning above the cap is
/// exact because a subderivation's counts never exceed the final word's.
pub fn cfg_parikh_members(g: &ContextFreeGrammar, cap: u64) -> BTreeSet<Vec<u64>> {
    let dim = g.terminals.len();
    let n = g.nonterminals.len();
    let mut sets: Vec<BTreeSet<Vec<u64>>> = vec![BTreeSet::new(); n];
    loop {
        let mut changed = false;
        for (lhs, rhs) in &g.productions {
            let mut partials: Vec<Vec<u64>> = vec![vec![0; dim]];
            let mut dead = false;
            for s in rhs {
                match s {
                    GSym::T(t) => {
                        for p in partials.iter_mut() {
                            p[*t] += 1;
                        }
                        partials.retain(|p| p.iter().all(|&c| c <= cap));
                    }
                    GSym::N(i) => {
                        let mut next = Vec::new();
                        for p in &partials {
                            for v in &sets[*i] {
                                let sum: Vec<u64> =
                                    p.iter().zip(v).map(|(a, b)| a + b).collect();
                                if sum.iter().all(|&c| c <= cap) {
                                    next.push(sum);
                                }
                            }
                        }
                        next.sort();
                        next.dedup();
                        partials = next;
                    }
                }
                if partials.is_empty() {
                    dead = true;
                    break;
                }
            }
            if !dead {
                for p in partials {
                    changed |= sets[*lhs].insert(p);
                }
            }
        }
        if !changed {
            break;
        }
    }
    sets[g.start].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_enumeration_counts() {
        let alpha: Vec<Symbol> = vec!["a".into(), "b".into()];
        assert_eq!(words(&alpha, 2).len(), 1 + 2 + 4);
    }

    #[test]
    fn tree_enumeration_counts() {
        let sig = Signature::tree(&[("f", 2), ("a", 0), ("b", 0)]);
        // sizes 1,3,5,7 over f/2 with two leaf symbols: 2, 4, 16, 80
        assert_eq!(trees(&sig, 7).len(), 2 + 4 + 16 + 80);
    }

    #[test]
    fn anbn_language() {
        let g = ContextFreeGrammar::parse("start: S\nS -> a S b | ε\n").unwrap();
        let lang = cfg_language(&g, 6);
        let expect: BTreeSet<Vec<Symbol>> = [
            vec![],
            vec!["a".into(), "b".into()],
            vec!["a".into(), "a".into(), "b".into(), "b".into()],
            vec!["a".into(), "a".into(), "a".into(), "b".into(), "b".into(), "b".into()],
        ]
        .into_iter()
        .collect();
        assert_eq!(lang, expect);
    }

    #[test]
    fn rtg_language_matches_by_hand() {
        let g = RegularTreeGrammar::parse("start: S\nS -> f(A,A)\nA -> a\n").unwrap();
        let lang = rtg_language(&g, 7);
        assert_eq!(lang.len(), 1);
        assert!(lang.contains(&Term::parse("f(a,a)").unwrap()));
    }
}
