//! Compilation of MSO formulas into deterministic word and tree automata.

pub mod alphabet;
pub mod build;
pub mod tree;
pub mod word;

pub use alphabet::{BitAlphabet, PAD};
pub use build::{
    compile_tree, compile_word, context_from_formula, context_of, encode_word, tree_accepts,
    tree_valuations, word_accepts, word_valuations, DEFAULT_STATE_CAP,
};
pub use tree::{encode_term, AnnotatedTerm, TreeAutomaton};
pub use word::WordAutomaton;

#[cfg(test)]
mod word_tests {
    use super::*;
    use crate::formulas::{check, parse_formula, Assignment, Context, Formula, Macro, Sort};
    use crate::signature::Signature;
    use crate::structures::string_to_graph;

    fn sig() -> Signature {
        Signature::string(&["a", "b"])
    }

    fn all_words(max_len: usize) -> Vec<Vec<String>> {
        let mut out = vec![vec![]];
        let mut layer: Vec<Vec<String>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for c in ["a", "b"] {
                    let mut w2 = w.clone();
                    w2.push(c.to_string());
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// The central soundness check: automaton acceptance equals the direct
    /// model checker, on every word up to the length bound and every
    /// valuation of the free variables.
    fn assert_agreement(f: &Formula, ctx: &Context, max_len: usize) {
        let s = sig();
        let a = compile_word(f, ctx, &s, DEFAULT_STATE_CAP).unwrap();
        for w in all_words(max_len) {
            let g = string_to_graph(&w, &s.edge_labels).unwrap();
            for val in word_valuations(ctx, g.node_count()) {
                let direct = check(f, &g, &val).unwrap();
                let compiled = word_accepts(&a, &w, &val).unwrap();
                assert_eq!(
                    direct, compiled,
                    "disagreement on {f} at w={w:?} val={val:?}"
                );
            }
        }
    }

    #[test]
    fn contains_an_a_edge() {
        let f = Formula::exists("x", Formula::exists("y", Formula::edge("a", "x", "y")));
        let a = compile_word(&f, &vec![], &sig(), DEFAULT_STATE_CAP).unwrap();
        for w in all_words(6) {
            let expected = w.iter().any(|c| c == "a");
            assert_eq!(
                word_accepts(&a, &w, &Assignment::new()).unwrap(),
                expected,
                "on {w:?}"
            );
        }
    }

    #[test]
    fn false_compiles_to_the_empty_language() {
        let a = compile_word(&Formula::False, &vec![], &sig(), DEFAULT_STATE_CAP).unwrap();
        assert!(a.is_empty());
        assert_eq!(a.minimize().n_states, a.n_states, "minimize is idempotent");
    }

    #[test]
    fn true_compiles_to_the_universal_language() {
        let a = compile_word(&Formula::True, &vec![], &sig(), DEFAULT_STATE_CAP).unwrap();
        for w in all_words(4) {
            assert!(word_accepts(&a, &w, &Assignment::new()).unwrap());
        }
    }

    #[test]
    fn reach_accepts_marked_pair_in_order() {
        let f = Formula::apply(Macro::Reach, &["x", "y"]);
        let ctx = context_of(&[("x", Sort::Node), ("y", Sort::Node)]);
        let a = compile_word(&f, &ctx, &sig(), DEFAULT_STATE_CAP).unwrap();
        // "ab" has nodes 0,1,2; node 0 reaches node 2.
        let w: Vec<String> = vec!["a".into(), "b".into()];
        assert!(word_accepts(&a, &w, &Assignment::new().node("x", 0).node("y", 2)).unwrap());
        assert!(!word_accepts(&a, &w, &Assignment::new().node("x", 2).node("y", 0)).unwrap());
        assert_agreement(&f, &ctx, 4);
    }

    #[test]
    fn oracle_agreement_on_closed_formulas() {
        let cases = [
            "(exists x (exists y (edg_a x y)))",
            "(forall x (forall y (implies (edg_a x y) (exists z (edg_b y z)))))",
            "(exists X (forall x (in x X)))",
            "(forall x (exists y (or (edg_a x y) (edg_b x y) (reach y x))))",
            "(not (exists x (exists y (and (edg_a x y) (exists z (edg_a y z))))))",
        ];
        for text in cases {
            let f = parse_formula(text, &sig(), &vec![]).unwrap();
            assert_agreement(&f, &vec![], 5);
        }
    }

    #[test]
    fn oracle_agreement_with_free_variables() {
        let ctx = context_of(&[("x", Sort::Node), ("Y", Sort::NodeSet)]);
        let cases = [
            "(in x Y)",
            "(and (in x Y) (exists z (edg_a x z)))",
            "(iff (in x Y) (root x))",
            "(singleton Y)",
        ];
        for text in cases {
            let f = parse_formula(text, &sig(), &ctx).unwrap();
            assert_agreement(&f, &ctx, 3);
        }
    }

    #[test]
    fn accepts_empty_word_has_hash_node() {
        let f = Formula::exists("x", Formula::lab("#", "x"));
        let a = compile_word(&f, &vec![], &sig(), DEFAULT_STATE_CAP).unwrap();
        assert!(word_accepts(&a, &[], &Assignment::new()).unwrap());
    }

    #[test]
    fn product_with_complement_is_empty() {
        let f = Formula::exists("x", Formula::exists("y", Formula::edge("a", "x", "y")));
        let a = compile_word(&f, &vec![], &sig(), DEFAULT_STATE_CAP).unwrap();
        let inter = a
            .product(&a.complement(), |x, y| x && y, DEFAULT_STATE_CAP)
            .unwrap();
        assert!(inter.is_empty());
    }

    #[test]
    fn boolean_ops_are_language_level() {
        let s = sig();
        let f = parse_formula("(exists x (exists y (edg_a x y)))", &s, &vec![]).unwrap();
        let g = parse_formula("(exists x (exists y (edg_b x y)))", &s, &vec![]).unwrap();
        let af = compile_word(&f, &vec![], &s, DEFAULT_STATE_CAP).unwrap();
        let ag = compile_word(&g, &vec![], &s, DEFAULT_STATE_CAP).unwrap();
        let aand = compile_word(&Formula::and(f.clone(), g.clone()), &vec![], &s, DEFAULT_STATE_CAP).unwrap();
        let anot = compile_word(&Formula::not(f.clone()), &vec![], &s, DEFAULT_STATE_CAP).unwrap();
        for w in all_words(6) {
            let e = Assignment::new();
            let vf = word_accepts(&af, &w, &e).unwrap();
            let vg = word_accepts(&ag, &w, &e).unwrap();
            assert_eq!(word_accepts(&aand, &w, &e).unwrap(), vf && vg);
            assert_eq!(word_accepts(&anot, &w, &e).unwrap(), !vf);
        }
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_language() {
        let s = sig();
        let f = parse_formula(
            "(forall x (implies (exists y (edg_a x y)) (exists z (edg_b z x))))",
            &s,
            &vec![],
        )
        .unwrap();
        let a = compile_word(&f, &vec![], &s, DEFAULT_STATE_CAP).unwrap();
        let m = a.minimize();
        assert_eq!(m.n_states, m.minimize().n_states);
        for w in all_words(6) {
            let e = Assignment::new();
            assert_eq!(
                word_accepts(&a, &w, &e).unwrap(),
                word_accepts(&m, &w, &e).unwrap()
            );
        }
    }

    #[test]
    fn projection_of_marked_letter_gives_contains_a() {
        // exactly one marked position whose letter is a; projecting the
        // mark yields "some letter is a".
        let s = sig();
        let f = Formula::exists(
            "x",
            Formula::exists("y", Formula::edge("a", "x", "y")),
        );
        let a = compile_word(&f, &vec![], &s, DEFAULT_STATE_CAP).unwrap();
        for w in all_words(6) {
            assert_eq!(
                word_accepts(&a, &w, &Assignment::new()).unwrap(),
                w.iter().any(|c| c == "a")
            );
        }
    }

    #[test]
    fn state_cap_is_reported() {
        let s = sig();
        let f = parse_formula(
            "(exists X (exists Y (exists Z (forall x (forall y (implies (edg_a x y) (and (in x X) (and (in y Y) (in x Z)))))))))",
            &s,
            &vec![],
        )
        .unwrap();
        let r = compile_word(&f, &vec![], &s, 2);
        assert!(matches!(r, Err(crate::error::CompileError::StateCap { .. })));
    }
}

#[cfg(test)]
mod tree_tests {
    use super::*;
    use crate::formulas::{check, parse_formula, Assignment, Context, Formula, Macro, Sort};
    use crate::signature::Signature;
    use crate::structures::{tree_to_graph, Term};

    fn sig() -> Signature {
        Signature::tree(&[("f", 2), ("a", 0), ("b", 0)])
    }

    /// All terms over {f/2, a/0, b/0} with at most `max_nodes` nodes.
    pub fn all_trees(max_nodes: usize) -> Vec<Term> {
        let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_nodes + 1];
        if max_nodes >= 1 {
            by_size[1] = vec![Term::leaf("a"), Term::leaf("b")];
        }
        for n in 2..=max_nodes {
            let mut out = Vec::new();
            for left in 1..n - 1 {
                let right = n - 1 - left;
                for l in by_size[left].clone() {
                    for r in by_size[right].clone() {
                        out.push(Term::new("f", vec![l.clone(), r]));
                    }
                }
            }
            by_size[n] = out;
        }
        by_size.into_iter().flatten().collect()
    }

    fn assert_agreement(f: &Formula, ctx: &Context, max_nodes: usize) {
        let s = sig();
        let a = compile_tree(f, ctx, &s, DEFAULT_STATE_CAP).unwrap();
        let ranks = s.ranks.as_ref().unwrap();
        for t in all_trees(max_nodes) {
            let g = tree_to_graph(&t, ranks).unwrap();
            for val in tree_valuations(ctx, g.node_count()) {
                let direct = check(f, &g, &val).unwrap();
                let compiled = tree_accepts(&a, &t, &val).unwrap();
                assert_eq!(direct, compiled, "disagreement on {f} at t={t} val={val:?}");
            }
        }
    }

    #[test]
    fn root_atom_marks_the_root() {
        let f = Formula::apply(Macro::Root, &["x"]);
        let ctx = context_of(&[("x", Sort::Node)]);
        let a = compile_tree(&f, &ctx, &sig(), DEFAULT_STATE_CAP).unwrap();
        let t = Term::parse("f(a,b)").unwrap();
        assert!(tree_accepts(&a, &t, &Assignment::new().node("x", 0)).unwrap());
        assert!(!tree_accepts(&a, &t, &Assignment::new().node("x", 1)).unwrap());
        assert_agreement(&f, &ctx, 7);
    }

    #[test]
    fn universal_automaton_accepts_everything() {
        let a = compile_tree(&Formula::True, &vec![], &sig(), DEFAULT_STATE_CAP).unwrap();
        for t in all_trees(5) {
            assert!(tree_accepts(&a, &t, &Assignment::new()).unwrap());
        }
        assert!(!a.is_empty());
    }

    #[test]
    fn exists_a_label_rejects_single_b() {
        let f = Formula::exists("x", Formula::lab("a", "x"));
        let a = compile_tree(&f, &vec![], &sig(), DEFAULT_STATE_CAP).unwrap();
        assert!(!tree_accepts(&a, &Term::leaf("b"), &Assignment::new()).unwrap());
        assert!(tree_accepts(&a, &Term::leaf("a"), &Assignment::new()).unwrap());
        assert!(tree_accepts(&a, &Term::parse("f(b,a)").unwrap(), &Assignment::new()).unwrap());
    }

    #[test]
    fn oracle_agreement_on_closed_tree_formulas() {
        let s = sig();
        let cases = [
            "(exists x (lab_a x))",
            "(forall x (implies (lab_f x) (exists y (edg_1 x y))))",
            "(exists x (and (root x) (lab_f x)))",
            "(exists x (exists y (and (edg_1 x y) (lab_b y))))",
            "(forall x (forall y (implies (edg_2 x y) (reach x y))))",
        ];
        for text in cases {
            let f = parse_formula(text, &s, &vec![]).unwrap();
            assert_agreement(&f, &vec![], 7);
        }
    }

    #[test]
    fn oracle_agreement_with_free_tree_variables() {
        let ctx = context_of(&[("x", Sort::Node), ("y", Sort::Node)]);
        let cases = ["(edg_1 x y)", "(reach x y)", "(preord x y)", "(= x y)"];
        for text in cases {
            let f = parse_formula(text, &sig(), &ctx).unwrap();
            assert_agreement(&f, &ctx, 5);
        }
    }

    #[test]
    fn emptiness_and_witness() {
        let s = sig();
        // Trees whose root is labeled a: only the single leaf a.
        let f = parse_formula("(exists x (and (root x) (lab_a x)))", &s, &vec![]).unwrap();
        let a = compile_tree(&f, &vec![], &s, DEFAULT_STATE_CAP).unwrap();
        let w = a.smallest_accepted().unwrap().to_term(&a.alphabet);
        assert_eq!(w, Term::leaf("a"));
        let none = compile_tree(&Formula::False, &vec![], &s, DEFAULT_STATE_CAP).unwrap();
        assert!(none.is_empty());
    }
}
