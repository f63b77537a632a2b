//! Grammars, Parikh images and the semilinear-set algebra, including the
//! diagonal test at the heart of the equivalence decision.

pub mod diophantine;
pub mod grammar;
pub mod newton;
pub mod semilinear;

pub use diophantine::{minimal_solutions, Solutions};
pub use grammar::{rtg_to_cfg, ContextFreeGrammar, GSym, RegularTreeGrammar};
pub use newton::{
    cfg_parikh, cfg_parikh_limited, diagonal_nonempty, solve_linear_system, weighted_parikh,
    EngineLimits, WeightedCfg,
};
pub use semilinear::{in_span, LinearSet, SemilinearSet};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    /// The enumeration oracle for Parikh exactness: membership in the
    /// computed set must coincide with membership in the Parikh image of
    /// the enumerated bounded language, for every vector below the bound.
    fn assert_parikh_exact(g: &ContextFreeGrammar, comp_bound: u64) {
        let s = cfg_parikh(g).unwrap();
        let dim = g.terminals.len();
        let max_len = (comp_bound as usize) * dim;
        let lang = oracle::cfg_language(g, max_len);
        let mut derivable: std::collections::BTreeSet<Vec<u64>> = Default::default();
        for w in &lang {
            derivable.insert(oracle::counts_of(w, &g.terminals));
        }
        let mut v = vec![0u64; dim];
        loop {
            let expect = derivable.contains(&v);
            let got = s.member(&v).unwrap();
            assert_eq!(got, expect, "cfg_parikh disagrees at {v:?} for\n{g}");
            // advance odometer
            let mut pos = 0;
            loop {
                if pos == dim {
                    return;
                }
                v[pos] += 1;
                if v[pos] <= comp_bound {
                    break;
                }
                v[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn anbn_is_the_diagonal() {
        let g = ContextFreeGrammar::parse("start: S\nS -> a S b | ε\n").unwrap();
        let s = cfg_parikh(&g).unwrap();
        assert!(s.member(&[0, 0]).unwrap());
        assert!(s.member(&[4, 4]).unwrap());
        assert!(!s.member(&[2, 3]).unwrap());
        assert_parikh_exact(&g, 5);
    }

    #[test]
    fn singleton_language() {
        let g = ContextFreeGrammar::parse("start: S\nS -> a\n").unwrap();
        let s = cfg_parikh(&g).unwrap();
        assert!(s.member(&[1]).unwrap());
        assert!(!s.member(&[0]).unwrap());
        assert!(!s.member(&[2]).unwrap());
    }

    #[test]
    fn unproductive_grammar_is_empty() {
        let g = ContextFreeGrammar::parse("start: S\nS -> S\n").unwrap();
        let s = cfg_parikh(&g).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn dyck_parikh_is_balanced() {
        let g = ContextFreeGrammar::parse("start: S\nS -> a S b S | ε\n").unwrap();
        assert_parikh_exact(&g, 5);
    }

    #[test]
    fn regular_grammar_parikh() {
        // (ab)* as a right-linear grammar
        let g = ContextFreeGrammar::parse("start: S\nS -> a B | ε\nB -> b S\n").unwrap();
        assert_parikh_exact(&g, 6);
        // a(a|b)* right-linear
        let g2 = ContextFreeGrammar::parse("start: S\nS -> a T\nT -> a T | b T | ε\n").unwrap();
        assert_parikh_exact(&g2, 4);
    }

    #[test]
    fn tree_grammar_parikh_via_cfg() {
        let t = RegularTreeGrammar::parse("start: S\nS -> f(A,A)\nA -> a\n").unwrap();
        let g = rtg_to_cfg(&t);
        let s = cfg_parikh(&g).unwrap();
        // exactly one f and two a's
        assert!(s.member(&[1, 2]).unwrap());
        assert!(!s.member(&[1, 1]).unwrap());
        assert!(!s.member(&[2, 2]).unwrap());

        // all trees over f/2, a, b: node-label Parikh images
        let t2 = RegularTreeGrammar::parse(
            "start: S\nS -> f(S,S) | a | b\n",
        )
        .unwrap();
        let g2 = rtg_to_cfg(&t2);
        assert_parikh_exact(&g2, 4);
    }

    #[test]
    fn rtg_parikh_matches_tree_enumeration() {
        let t = RegularTreeGrammar::parse("start: S\nS -> f(S,A) | a\nA -> a | b\n").unwrap();
        let g = rtg_to_cfg(&t);
        let s = cfg_parikh(&g).unwrap();
        let mut seen: std::collections::BTreeSet<Vec<u64>> = Default::default();
        for tree in oracle::rtg_language(&t, 9) {
            seen.insert(oracle::counts_of(
                &tree.preorder_labels(),
                &g.terminals,
            ));
        }
        for v in &seen {
            assert!(s.member(v).unwrap(), "missing {v:?}");
        }
        // and nothing small that the enumeration cannot justify
        for f in 0..=3u64 {
            for a in 0..=3u64 {
                for b in 0..=2u64 {
                    let v = vec![f, a, b];
                    // trees with <= 9 nodes cover all vectors this small
                    if f + a + b <= 4 {
                        assert_eq!(
                            s.member(&v).unwrap(),
                            seen.contains(&v),
                            "mismatch at {v:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_of_a_star_b() {
        // Par(a*b) = {(n,1)}
        let g = ContextFreeGrammar::parse("start: S\nS -> a S | b\n").unwrap();
        let s = cfg_parikh(&g).unwrap();
        assert_eq!(diagonal_nonempty(&s).unwrap(), Some(1));
    }

    #[test]
    fn diagonal_of_zero_point() {
        let s = SemilinearSet::point(vec![0, 0]);
        assert_eq!(diagonal_nonempty(&s).unwrap(), Some(0));
    }

    #[test]
    fn diagonal_misses_shifted_line() {
        // base (0,1), period (1,1): second stays one ahead
        let s = SemilinearSet::from_parts(
            2,
            vec![LinearSet {
                base: vec![0, 1],
                periods: vec![vec![1, 1]],
            }],
        );
        assert_eq!(diagonal_nonempty(&s).unwrap(), None);
        // oracle: no (n,n) for n <= 50
        for n in 0..=50u64 {
            assert!(!s.member(&[n, n]).unwrap());
        }
    }

    #[test]
    fn diagonal_scan_cross_check() {
        let g = ContextFreeGrammar::parse("start: S\nS -> a S | b\n").unwrap();
        let s = cfg_parikh(&g).unwrap();
        let direct = diagonal_nonempty(&s).unwrap();
        let scanned = (0..=50u64).find(|&n| s.member(&[n, n]).unwrap());
        assert_eq!(direct, scanned);
    }

    #[test]
    fn cfg_parikh_empty_language_cases() {
        let g = ContextFreeGrammar::parse("start: S\nS -> a U\nU -> U\n").unwrap();
        assert!(cfg_parikh(&g).unwrap().is_empty());
    }

    #[test]
    fn diagonal_wrong_dimension_is_an_error() {
        let s = SemilinearSet::point(vec![1]);
        assert!(diagonal_nonempty(&s).is_err());
    }
}
