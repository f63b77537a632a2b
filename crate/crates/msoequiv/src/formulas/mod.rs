//! MSO formulas: abstract syntax, parsing, derived predicates, and the
//! direct model-checking oracle.

pub mod ast;
pub mod check;
pub mod macros;
pub mod parse;

pub use ast::{Formula, Macro, Sort};
pub use check::{bfs_reaches, check, check_with_cap, Assignment, DEFAULT_SET_CAP};
pub use macros::{expand_derived, expand_keep_eq};
pub use parse::{parse_formula, parse_formula_file, var_sort, Context, FormulaFile};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::Signature;
    use crate::structures::{string_to_graph, tree_to_graph, Graph, Term};

    fn sg(w: &str) -> Graph {
        let word: Vec<String> = w.chars().map(|c| c.to_string()).collect();
        let delta: Vec<String> = vec!["a".into(), "b".into()];
        string_to_graph(&word, &delta).unwrap()
    }

    fn string_sig() -> Signature {
        Signature::string(&["a", "b"])
    }

    #[test]
    fn parse_exists_lab() {
        let sig = Signature::dgraph(&["a", "b"]);
        let f = parse_formula("(exists x (lab_a x))", &sig, &vec![]).unwrap();
        assert_eq!(
            f,
            Formula::exists("x", Formula::lab("a", "x"))
        );
        assert!(f.free_vars().is_empty());
    }

    #[test]
    fn parse_membership_atom() {
        let sig = string_sig();
        let ctx = vec![("x".to_string(), Sort::Node), ("X".to_string(), Sort::NodeSet)];
        let f = parse_formula("(in x X)", &sig, &ctx).unwrap();
        assert_eq!(f, Formula::member("x", "X"));
    }

    #[test]
    fn unknown_edge_label_is_an_error() {
        let sig = Signature::new(vec!["#".into()], vec!["1".into(), "2".into()]);
        let ctx = vec![("x".to_string(), Sort::Node), ("y".to_string(), Sort::Node)];
        let err = parse_formula("(edg_c x y)", &sig, &ctx).unwrap_err();
        assert_eq!(err, crate::error::FormulaError::UnknownEdgeLabel("c".into()));
    }

    #[test]
    fn undeclared_free_variable_is_an_error() {
        let sig = string_sig();
        let err = parse_formula("(lab_# x)", &sig, &vec![]).unwrap_err();
        assert!(matches!(err, crate::error::FormulaError::Unbound(_)));
    }

    #[test]
    fn check_edge_existence() {
        let f = Formula::exists("x", Formula::exists("y", Formula::edge("a", "x", "y")));
        assert!(check(&f, &sg("ba"), &Assignment::new()).unwrap());
        assert!(!check(&f, &sg("bb"), &Assignment::new()).unwrap());
    }

    #[test]
    fn check_reach_on_string_graph() {
        // "ab" has nodes v1,v2,v3; v1 reaches v3.
        let f = Formula::apply(Macro::Reach, &["x", "y"]);
        let g = sg("ab");
        assert!(check(&f, &g, &Assignment::new().node("x", 0).node("y", 2)).unwrap());
        assert!(!check(&f, &g, &Assignment::new().node("x", 2).node("y", 0)).unwrap());
    }

    #[test]
    fn macro_expansion_matches_direct_meaning() {
        let sig = string_sig();
        let reach = Formula::apply(Macro::Reach, &["x", "y"]);
        let expanded = expand_derived(&reach, &sig).unwrap();
        assert!(expanded.is_core());
        for w in ["", "a", "ab", "bab", "aabb"] {
            let g = sg(w);
            for u in g.nodes() {
                for v in g.nodes() {
                    let a = Assignment::new().node("x", u).node("y", v);
                    assert_eq!(
                        check(&reach, &g, &a).unwrap(),
                        check(&expanded, &g, &a).unwrap(),
                        "reach mismatch on {w:?} {u} {v}"
                    );
                }
            }
        }
    }

    #[test]
    fn expansion_is_identity_on_core_formulas() {
        let sig = string_sig();
        let f = Formula::exists("x", Formula::lab("#", "x"));
        let e = expand_derived(&f, &sig).unwrap();
        // Alpha-renaming aside, the shape is unchanged.
        assert!(e.is_core());
        assert!(matches!(e, Formula::Exists(Sort::Node, _, _)));
    }

    #[test]
    fn singleton_expansion() {
        let sig = string_sig();
        let f = Formula::apply(Macro::Singleton, &["Y"]);
        let e = expand_derived(&f, &sig).unwrap();
        assert!(e.is_core());
        let g = sg("ab");
        for mask in 0u32..8 {
            let set: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
            let a = Assignment::new().set("Y", set.clone());
            assert_eq!(
                check(&f, &g, &a).unwrap(),
                check(&e, &g, &a).unwrap(),
                "singleton mismatch on {set:?}"
            );
            assert_eq!(check(&f, &g, &a).unwrap(), set.len() == 1);
        }
    }

    #[test]
    fn equality_matches_its_set_encoding() {
        
        let eq = Formula::eq("x", "y");
        let encoded = macros::eq_as_sets("x", "y");
        let g = sg("ab");
        for u in g.nodes() {
            for v in g.nodes() {
                let a = Assignment::new().node("x", u).node("y", v);
                assert_eq!(
                    check(&eq, &g, &a).unwrap(),
                    check(&encoded, &g, &a).unwrap()
                );
            }
        }
    }

    #[test]
    fn boolean_connectives_agree_with_truth_tables() {
        let f = Formula::exists("x", Formula::exists("y", Formula::edge("a", "x", "y")));
        let h = Formula::exists("x", Formula::exists("y", Formula::edge("b", "x", "y")));
        for w in ["", "a", "b", "ab", "ba", "bb", "aa"] {
            let g = sg(w);
            let a = Assignment::new();
            let fv = check(&f, &g, &a).unwrap();
            let hv = check(&h, &g, &a).unwrap();
            assert_eq!(check(&Formula::not(f.clone()), &g, &a).unwrap(), !fv);
            assert_eq!(
                check(&Formula::and(f.clone(), h.clone()), &g, &a).unwrap(),
                fv && hv
            );
            assert_eq!(
                check(&Formula::or(f.clone(), h.clone()), &g, &a).unwrap(),
                fv || hv
            );
        }
    }

    #[test]
    fn reach_agrees_with_bfs_on_trees() {
        let sig = Signature::tree(&[("f", 2), ("a", 0), ("b", 0)]);
        let ranks = sig.ranks.as_ref().unwrap();
        let t = Term::parse("f(f(a,b),a)").unwrap();
        let g = tree_to_graph(&t, ranks).unwrap();
        let reach = Formula::apply(Macro::Reach, &["x", "y"]);
        for u in g.nodes() {
            for v in g.nodes() {
                let a = Assignment::new().node("x", u).node("y", v);
                assert_eq!(
                    check(&reach, &g, &a).unwrap(),
                    bfs_reaches(&g, u, v)
                );
            }
        }
    }

    #[test]
    fn preord_succ_walks_the_tree_in_preorder() {
        let sig = Signature::tree(&[("f", 2), ("a", 0), ("b", 0)]);
        let ranks = sig.ranks.as_ref().unwrap();
        // f(f(a,b),a): preorder is 0,1,2,3,4 by construction of tree_to_graph.
        let t = Term::parse("f(f(a,b),a)").unwrap();
        let g = tree_to_graph(&t, ranks).unwrap();
        let pi = Formula::apply(Macro::PreordSucc, &["x", "y"]);
        let expanded = expand_derived(&pi, &sig).unwrap();
        for u in g.nodes() {
            for v in g.nodes() {
                let a = Assignment::new().node("x", u).node("y", v);
                let direct = check(&pi, &g, &a).unwrap();
                assert_eq!(direct, v == u + 1, "direct preord wrong at {u},{v}");
                let enc = check(&expanded, &g, &a).unwrap();
                assert_eq!(direct, enc, "preord encoding mismatch at {u},{v}");
            }
        }
    }

    #[test]
    fn oracle_refuses_large_set_quantification() {
        let delta: Vec<String> = vec!["a".into()];
        let word: Vec<String> = (0..14).map(|_| "a".to_string()).collect();
        let g = string_to_graph(&word, &delta).unwrap();
        let f = Formula::exists_set("X", Formula::True);
        assert!(matches!(
            check(&f, &g, &Assignment::new()),
            Err(crate::error::FormulaError::OracleCapExceeded(15, 12))
        ));
    }

    #[test]
    fn formula_file_round_trip() {
        let text = "sigma: #\ngamma: a b\nfree: x Y1\n(and (in x Y1) (exists y (edg_a x y)))\n";
        let file = parse_formula_file(text).unwrap();
        assert_eq!(file.free.len(), 2);
        assert_eq!(file.signature.edge_labels, vec!["a", "b"]);
        let printed = file.formula.to_string();
        let reparsed = parse_formula(&printed, &file.signature, &file.free).unwrap();
        assert_eq!(reparsed, file.formula);
    }
}
