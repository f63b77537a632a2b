use super::*;
use crate::corpus;
use crate::oracle;
use crate::signature::Symbol;
use crate::structures::{graph_to_string, string_to_graph};
use crate::transducers::evaluate;

fn syms(s: &str) -> Vec<Symbol> {
    s.chars().map(|c| c.to_string()).collect()
}

fn sigma_star() -> DomainSpec {
    DomainSpec::regex("(a|b)*", &syms("ab")).unwrap()
}

fn budget() -> Budget {
    Budget::new()
}

#[test]
fn identity_vs_identity_is_equivalent() {
    let id = corpus::identity(&["a", "b"]);
    let v = decide(&id, &id, &sigma_star(), &budget()).unwrap();
    assert_eq!(v, Verdict::Equivalent);
}

#[test]
fn identity_vs_reverse_is_inequivalent_with_short_witness() {
    let id = corpus::identity(&["a", "b"]);
    let rev = corpus::reverse(&["a", "b"]);
    let v = decide(&id, &rev, &sigma_star(), &budget()).unwrap();
    match v {
        Verdict::OutputMismatch { witness, .. } => {
            let w = witness.expect("concrete witness within bound");
            match &w {
                InputValue::Word(word) => assert!(word.len() <= 2, "witness {w}"),
                _ => panic!("word expected"),
            }
            assert!(outputs_differ(&id, &rev, &w));
        }
        other => panic!("expected output mismatch, got {other}"),
    }
}

#[test]
fn identity_vs_reverse_on_palindromes_is_equivalent() {
    let id = corpus::identity(&["a", "b"]);
    let rev = corpus::reverse(&["a", "b"]);
    let d = DomainSpec::Cfg(corpus::palindrome_cfg());
    let v = decide(&id, &rev, &d, &budget()).unwrap();
    assert_eq!(v, Verdict::Equivalent);
}

#[test]
fn domain_mismatch_is_detected_and_witnessed() {
    let id = corpus::identity(&["a", "b"]);
    let has_a = corpus::identity_if_has_a(&["a", "b"]);
    let v = decide(&id, &has_a, &sigma_star(), &budget()).unwrap();
    match v {
        Verdict::DomainMismatch { witness } => {
            let w = witness.expect("validated witness");
            // shortest disagreeing inputs are ε and b
            match &w {
                InputValue::Word(word) => {
                    assert!(word.is_empty() || word == &syms("b"), "witness {w}")
                }
                _ => panic!("word expected"),
            }
        }
        other => panic!("expected domain mismatch, got {other}"),
    }
}

#[test]
fn domain_mismatch_disappears_on_a_prefixed_domain() {
    // every word of a(a|b)* contains an a, so the domains agree there
    let id = corpus::identity(&["a", "b"]);
    let has_a = corpus::identity_if_has_a(&["a", "b"]);
    let d = DomainSpec::regex("a(a|b)*", &syms("ab")).unwrap();
    let v = decide(&id, &has_a, &d, &budget()).unwrap();
    assert_eq!(v, Verdict::Equivalent);
}

#[test]
fn domains_agree_oracle_check() {
    // cross-check the symbolic domain test against enumeration
    let id = corpus::identity(&["a", "b"]);
    let has_a = corpus::identity_if_has_a(&["a", "b"]);
    let t1 = id.as_table().unwrap();
    let t2 = has_a.as_table().unwrap();
    for d in [
        sigma_star(),
        DomainSpec::regex("a(a|b)*", &syms("ab")).unwrap(),
        DomainSpec::Cfg(corpus::anbn_cfg()),
    ] {
        let symbolic = domains_agree(t1, t2, &d, &budget()).unwrap();
        let enumerated = domain_members(&d, 5).into_iter().find(|w| {
            crate::decider::witness::domain_witness_valid(&id, &has_a, w)
        });
        assert_eq!(symbolic.is_none(), enumerated.is_none(), "domain {d:?}");
    }
}

#[test]
fn marker_regression_prefix_pair_reports_marker() {
    let id = corpus::identity(&["a", "b"]);
    let ca = corpus::copy_then_a();
    let v = decide(&id, &ca, &sigma_star(), &budget()).unwrap();
    match v {
        Verdict::OutputMismatch { a, b, n, witness } => {
            assert!(
                a == "$" || b == "$",
                "a proper-prefix pair must be caught at the marker, got a={a} b={b}"
            );
            assert!(n >= 1);
            let w = witness.expect("concrete witness");
            assert!(outputs_differ(&id, &ca, &w));
        }
        other => panic!("expected output mismatch, got {other}"),
    }
}

#[test]
fn pair_parikh_agrees_with_brute_force_on_singletons() {
    // For single-word domains the pair image must match the brute-force
    // pair set computed from the evaluated outputs.
    let id = corpus::identity(&["a", "b"]);
    let rev = corpus::reverse(&["a", "b"]);
    let side1 = Side::new(id.as_table().unwrap(), "xl");
    let side2 = Side::new(rev.as_table().unwrap(), "xr");
    for w in oracle::words(&syms("ab"), 4) {
        let pattern: String = w.iter().map(|s| s.as_str()).collect();
        let d = DomainSpec::regex(if pattern.is_empty() { "ε" } else { &pattern }, &syms("ab"))
            .unwrap();
        let g = string_to_graph(&w, &syms("ab")).unwrap();
        let out1 = graph_to_string(&evaluate(&id, &g).unwrap()[0]).unwrap();
        let out2 = graph_to_string(&evaluate(&rev, &g).unwrap()[0]).unwrap();
        let marked1: Vec<Symbol> = out1.iter().cloned().chain(["$".to_string()]).collect();
        let marked2: Vec<Symbol> = out2.iter().cloned().chain(["$".to_string()]).collect();
        for (a, b) in [("a", "b"), ("b", "a"), ("a", "$"), ("$", "b")] {
            let la = if a == "$" {
                PairLetter::Marker
            } else {
                PairLetter::Sym(a.to_string())
            };
            let lb = if b == "$" {
                PairLetter::Marker
            } else {
                PairLetter::Sym(b.to_string())
            };
            let s = pair_parikh(&side1, &side2, &la, &lb, &d, &budget()).unwrap();
            for m in 1..=marked1.len() as u64 {
                for n in 1..=marked2.len() as u64 {
                    let expect = marked1[(m - 1) as usize] == a && marked2[(n - 1) as usize] == b;
                    assert_eq!(
                        s.member(&[m, n]).unwrap(),
                        expect,
                        "w={pattern:?} pair=({a},{b}) at ({m},{n})"
                    );
                }
            }
        }
    }
}

#[test]
fn verdicts_are_symmetric() {
    // Swapping the arguments swaps the roles of a and b: the second run's
    // witness, with letters swapped, is a valid abstract witness for the
    // first orientation.
    let id = corpus::identity(&["a", "b"]);
    let rev = corpus::reverse(&["a", "b"]);
    let v1 = decide(&id, &rev, &sigma_star(), &budget()).unwrap();
    let v2 = decide(&rev, &id, &sigma_star(), &budget()).unwrap();
    match (v1, v2) {
        (Verdict::OutputMismatch { .. }, Verdict::OutputMismatch { a: a2, b: b2, n: n2, .. }) => {
            let side1 = Side::new(id.as_table().unwrap(), "xl");
            let side2 = Side::new(rev.as_table().unwrap(), "xr");
            let to_letter = |s: &str| {
                if s == "$" {
                    PairLetter::Marker
                } else {
                    PairLetter::Sym(s.to_string())
                }
            };
            let s = pair_parikh(
                &side1,
                &side2,
                &to_letter(&b2),
                &to_letter(&a2),
                &sigma_star(),
                &budget(),
            )
            .unwrap();
            assert!(
                s.member(&[n2, n2]).unwrap(),
                "swapped witness ({b2},{a2},{n2}) must hold in the first orientation"
            );
        }
        other => panic!("expected two mismatches, got {other:?}"),
    }
}

#[test]
fn nondeterministic_inputs_are_rejected() {
    let n = crate::transducers::position_extractor(&syms("ab"), "a").unwrap();
    let id = corpus::identity(&["a", "b"]);
    assert!(matches!(
        decide(&n, &id, &sigma_star(), &budget()),
        Err(DecideError::Nondeterministic)
    ));
}

#[test]
fn budget_exhaustion_is_a_verdict() {
    let id = corpus::identity(&["a", "b"]);
    let rev = corpus::reverse(&["a", "b"]);
    let mut b = Budget::with_units(2);
    b.restart_clock();
    let v = decide(&id, &rev, &sigma_star(), &b).unwrap();
    assert!(matches!(v, Verdict::ResourceExceeded { .. }), "got {v}");
}

#[test]
fn tree_identity_vs_root_swap_on_all_trees() {
    let sig = corpus::tree_sig();
    let id = corpus::tree_identity(&sig);
    let swap = corpus::root_child_swap(&sig);
    let d = DomainSpec::Rtg(corpus::all_trees_rtg());
    let v = decide(&id, &swap, &d, &budget()).unwrap();
    match v {
        Verdict::OutputMismatch { witness, .. } => {
            let w = witness.expect("concrete witness");
            assert_eq!(w, InputValue::Tree(crate::structures::Term::parse("f(a,b)").unwrap()));
        }
        other => panic!("expected output mismatch, got {other}"),
    }
}

#[test]
fn tree_identity_vs_root_swap_on_symmetric_trees_is_equivalent() {
    let sig = corpus::tree_sig();
    let id = corpus::tree_identity(&sig);
    let swap = corpus::root_child_swap(&sig);
    let d = DomainSpec::Rtg(corpus::child_symmetric_rtg());
    let v = decide(&id, &swap, &d, &budget()).unwrap();
    assert_eq!(v, Verdict::Equivalent);
}

#[test]
fn cross_validation_against_differential_evaluation() {
    // No verdict may contradict exhaustive differential evaluation over
    // the domain members of bounded size.
    let d = sigma_star();
    for (name, m1, m2, expected_equivalent) in corpus::string_pairs() {
        let v = decide(&m1, &m2, &d, &budget()).unwrap();
        let differential_found = domain_members(&d, 6)
            .into_iter()
            .any(|w| outputs_differ(&m1, &m2, &w));
        match &v {
            Verdict::Equivalent => {
                assert!(!differential_found, "{name}: verdict equivalent but differential evaluation disagrees");
                assert!(expected_equivalent, "{name}: unexpected equivalence");
            }
            Verdict::DomainMismatch { .. } | Verdict::OutputMismatch { .. } => {
                assert!(differential_found, "{name}: verdict inequivalent but no difference found");
                assert!(!expected_equivalent, "{name}: unexpected inequivalence");
            }
            Verdict::ResourceExceeded { stage } => {
                panic!("{name}: resource exceeded at {stage}");
            }
        }
    }
}
