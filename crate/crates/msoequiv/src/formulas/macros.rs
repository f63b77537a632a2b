//! Definitions of the derived predicates and macro expansion.
//!
//! Expansion is signature-dependent: `reach` and `root` quantify over the
//! edge alphabet, and the pre-order successor needs the maximal rank.

use crate::error::FormulaError;
use crate::formulas::ast::{Formula, Macro};
use crate::signature::Signature;

/// Disjunction over all edge labels: exists an edge x -> y of any label.
fn any_edge(sig: &Signature, x: &str, y: &str) -> Formula {
    Formula::disj(sig.edge_labels.iter().map(|g| Formula::edge(g, x, y)))
}

/// singleton(Y): exists x in Y such that every member of Y equals x.
pub fn singleton(sig: &Signature, set: &str) -> Formula {
    let _ = sig;
    Formula::exists(
        "%sx",
        Formula::and(
            Formula::member("%sx", set),
            Formula::forall(
                "%sy",
                Formula::implies(Formula::member("%sy", set), Formula::eq("%sy", "%sx")),
            ),
        ),
    )
}

/// reach(x,y): every successor-closed set containing x contains y.
pub fn reach(sig: &Signature, x: &str, y: &str) -> Formula {
    let closed = Formula::forall(
        "%ru",
        Formula::forall(
            "%rv",
            Formula::implies(
                Formula::and(Formula::member("%ru", "%rZ"), any_edge(sig, "%ru", "%rv")),
                Formula::member("%rv", "%rZ"),
            ),
        ),
    );
    Formula::forall_set(
        "%rZ",
        Formula::implies(
            Formula::and(Formula::member(x, "%rZ"), closed),
            Formula::member(y, "%rZ"),
        ),
    )
}

/// root(x): x has no incoming edges.
pub fn root(sig: &Signature, x: &str) -> Formula {
    Formula::not(Formula::exists("%pr", any_edge(sig, "%pr", x)))
}

fn leaf(sig: &Signature, x: &str) -> Formula {
    Formula::not(Formula::exists("%lc", any_edge(sig, x, "%lc")))
}

/// next_sib(z,y): some parent has z as its i-th child and y as its (i+1)-th.
fn next_sibling(sig: &Signature, z: &str, y: &str) -> Formula {
    let m = sig.max_rank().max(sig.edge_labels.len());
    Formula::exists(
        "%np",
        Formula::disj((1..m).map(|i| {
            Formula::and(
                Formula::edge(&i.to_string(), "%np", z),
                Formula::edge(&(i + 1).to_string(), "%np", y),
            )
        })),
    )
}

/// preord(x,y): y follows x in pre-order. Either y is the first child of x,
/// or x is a leaf and y is the next sibling of the deepest ancestor-or-self
/// of x that has one.
pub fn preord_succ(sig: &Signature, x: &str, y: &str) -> Formula {
    let first_child = Formula::edge("1", x, y);
    let has_sib = |w: &str| Formula::exists("%hs", next_sibling(sig, w, "%hs"));
    let deepest = Formula::forall(
        "%pw",
        Formula::implies(
            Formula::conj([
                reach(sig, "%pw", x),
                reach(sig, "%pz", "%pw"),
                Formula::not(Formula::eq("%pw", "%pz")),
            ]),
            Formula::not(has_sib("%pw")),
        ),
    );
    let climb = Formula::exists(
        "%pz",
        Formula::conj([reach(sig, "%pz", x), next_sibling(sig, "%pz", y), deepest]),
    );
    Formula::or(first_child, Formula::and(leaf(sig, x), climb))
}

/// Node equality as a set formula: x and y belong to the same sets.
pub fn eq_as_sets(x: &str, y: &str) -> Formula {
    Formula::forall_set(
        "%eZ",
        Formula::iff(Formula::member(x, "%eZ"), Formula::member(y, "%eZ")),
    )
}

/// Replace every macro application (and every node equality) by its
/// definition, then rename bound variables apart. The result uses only core
/// constructors.
pub fn expand_derived(f: &Formula, sig: &Signature) -> Result<Formula, FormulaError> {
    let expanded = expand_inner(f, sig)?;
    Ok(expanded.normalize())
}

fn expand_inner(f: &Formula, sig: &Signature) -> Result<Formula, FormulaError> {
    Ok(match f {
        Formula::True
        | Formula::False
        | Formula::Lab(..)
        | Formula::Edge(..)
        | Formula::In(..) => f.clone(),
        Formula::Eq(x, y) => eq_as_sets(x, y),
        Formula::Not(g) => Formula::not(expand_inner(g, sig)?),
        Formula::And(a, b) => Formula::and(expand_inner(a, sig)?, expand_inner(b, sig)?),
        Formula::Or(a, b) => Formula::or(expand_inner(a, sig)?, expand_inner(b, sig)?),
        Formula::Implies(a, b) => Formula::implies(expand_inner(a, sig)?, expand_inner(b, sig)?),
        Formula::Iff(a, b) => Formula::iff(expand_inner(a, sig)?, expand_inner(b, sig)?),
        Formula::Exists(s, x, g) => {
            Formula::Exists(*s, x.clone(), Box::new(expand_inner(g, sig)?))
        }
        Formula::Forall(s, x, g) => {
            Formula::Forall(*s, x.clone(), Box::new(expand_inner(g, sig)?))
        }
        Formula::Apply(m, args) => {
            let body = match m {
                Macro::Singleton => singleton(sig, &args[0]),
                Macro::Reach => reach(sig, &args[0], &args[1]),
                Macro::Root => root(sig, &args[0]),
                Macro::PreordSucc => preord_succ(sig, &args[0], &args[1]),
            };
            expand_inner(&body, sig)?
        }
    })
}

/// Like [`expand_derived`] but keeps node equality as an atom; used by the
/// automaton compiler, which handles equality directly.
pub fn expand_keep_eq(f: &Formula, sig: &Signature) -> Result<Formula, FormulaError> {
    fn go(f: &Formula, sig: &Signature) -> Result<Formula, FormulaError> {
        Ok(match f {
            Formula::True
            | Formula::False
            | Formula::Lab(..)
            | Formula::Edge(..)
            | Formula::In(..)
            | Formula::Eq(..) => f.clone(),
            Formula::Not(g) => Formula::not(go(g, sig)?),
            Formula::And(a, b) => Formula::and(go(a, sig)?, go(b, sig)?),
            Formula::Or(a, b) => Formula::or(go(a, sig)?, go(b, sig)?),
            Formula::Implies(a, b) => Formula::implies(go(a, sig)?, go(b, sig)?),
            Formula::Iff(a, b) => Formula::iff(go(a, sig)?, go(b, sig)?),
            Formula::Exists(s, x, g) => Formula::Exists(*s, x.clone(), Box::new(go(g, sig)?)),
            Formula::Forall(s, x, g) => Formula::Forall(*s, x.clone(), Box::new(go(g, sig)?)),
            Formula::Apply(m, args) => {
                let body = match m {
                    Macro::Singleton => singleton(sig, &args[0]),
                    Macro::Reach => reach(sig, &args[0], &args[1]),
                    Macro::Root => root(sig, &args[0]),
                    Macro::PreordSucc => preord_succ(sig, &args[0], &args[1]),
                };
                go(&body, sig)?
            }
        })
    }
    Ok(go(f, sig)?.normalize())
}
