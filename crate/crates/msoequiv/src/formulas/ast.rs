//! Abstract syntax of MSO formulas over graphs.
//!
//! Atoms are lab_sigma(x), edg_gamma(x,y), x in X, and node equality x = y.
//! First-order variables range over nodes, set variables over node sets.
//! Derived predicates (singleton, reach, root, preord-successor) are kept
//! as unexpanded macro applications until [`expand_derived`] is called.
//!
//! [`expand_derived`]: super::macros::expand_derived

use std::collections::BTreeMap;
use std::fmt;

/// Sort of a variable occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sort {
    Node,
    NodeSet,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Node => write!(f, "first-order"),
            Sort::NodeSet => write!(f, "set"),
        }
    }
}

/// Built-in derived predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Macro {
    /// singleton(Y): Y contains exactly one node.
    Singleton,
    /// reach(x,y): there is a (possibly empty) path of edges from x to y.
    Reach,
    /// root(x): x has no incoming edges.
    Root,
    /// preord(x,y): y is the successor of x in the pre-order of a tree.
    PreordSucc,
}

impl Macro {
    pub fn name(self) -> &'static str {
        match self {
            Macro::Singleton => "singleton",
            Macro::Reach => "reach",
            Macro::Root => "root",
            Macro::PreordSucc => "preord",
        }
    }

    /// Sorts of the macro's arguments.
    pub fn arg_sorts(self) -> &'static [Sort] {
        match self {
            Macro::Singleton => &[Sort::NodeSet],
            Macro::Reach => &[Sort::Node, Sort::Node],
            Macro::Root => &[Sort::Node],
            Macro::PreordSucc => &[Sort::Node, Sort::Node],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    /// lab_sigma(x)
    Lab(String, String),
    /// edg_gamma(x,y)
    Edge(String, String, String),
    /// x in X
    In(String, String),
    /// x = y (same node)
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Sort, String, Box<Formula>),
    Forall(Sort, String, Box<Formula>),
    /// Unexpanded derived predicate application.
    Apply(Macro, Vec<String>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }
    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(Sort::Node, x.to_string(), Box::new(f))
    }
    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(Sort::Node, x.to_string(), Box::new(f))
    }
    pub fn exists_set(x: &str, f: Formula) -> Formula {
        Formula::Exists(Sort::NodeSet, x.to_string(), Box::new(f))
    }
    pub fn forall_set(x: &str, f: Formula) -> Formula {
        Formula::Forall(Sort::NodeSet, x.to_string(), Box::new(f))
    }
    pub fn lab(sigma: &str, x: &str) -> Formula {
        Formula::Lab(sigma.to_string(), x.to_string())
    }
    pub fn edge(gamma: &str, x: &str, y: &str) -> Formula {
        Formula::Edge(gamma.to_string(), x.to_string(), y.to_string())
    }
    pub fn member(x: &str, set: &str) -> Formula {
        Formula::In(x.to_string(), set.to_string())
    }
    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Eq(x.to_string(), y.to_string())
    }
    pub fn apply(m: Macro, args: &[&str]) -> Formula {
        Formula::Apply(m, args.iter().map(|s| s.to_string()).collect())
    }

    /// Conjunction of a list, `true` when empty.
    pub fn conj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of a list, `false` when empty.
    pub fn disj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Free variables with their sorts, in first-use order.
    pub fn free_vars(&self) -> BTreeMap<String, Sort> {
        let mut acc = BTreeMap::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut acc);
        acc
    }

    fn collect_free(&self, bound: &mut Vec<String>, acc: &mut BTreeMap<String, Sort>) {
        let var = |name: &String, sort: Sort, bound: &Vec<String>, acc: &mut BTreeMap<String, Sort>| {
            if !bound.contains(name) {
                acc.entry(name.clone()).or_insert(sort);
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Lab(_, x) => var(x, Sort::Node, bound, acc),
            Formula::Edge(_, x, y) => {
                var(x, Sort::Node, bound, acc);
                var(y, Sort::Node, bound, acc);
            }
            Formula::In(x, set) => {
                var(x, Sort::Node, bound, acc);
                var(set, Sort::NodeSet, bound, acc);
            }
            Formula::Eq(x, y) => {
                var(x, Sort::Node, bound, acc);
                var(y, Sort::Node, bound, acc);
            }
            Formula::Not(f) => f.collect_free(bound, acc),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, acc);
                b.collect_free(bound, acc);
            }
            Formula::Exists(_, x, f) | Formula::Forall(_, x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, acc);
                bound.pop();
            }
            Formula::Apply(m, args) => {
                for (a, s) in args.iter().zip(m.arg_sorts()) {
                    var(a, *s, bound, acc);
                }
            }
        }
    }

    /// True when no macro applications remain.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Apply(..) => false,
            Formula::True
            | Formula::False
            | Formula::Lab(..)
            | Formula::Edge(..)
            | Formula::In(..)
            | Formula::Eq(..) => true,
            Formula::Not(f) => f.is_core(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_core() && b.is_core(),
            Formula::Exists(_, _, f) | Formula::Forall(_, _, f) => f.is_core(),
        }
    }

    /// Rename every bound variable to a fresh unique name so that no
    /// variable is shadowed and bound names never collide with free ones.
    pub fn normalize(&self) -> Formula {
        let mut counter = 0usize;
        self.rename(&BTreeMap::new(), &mut counter)
    }

    /// Rename free variables according to `map`; bound occurrences shadow.
    pub fn rename_free(&self, map: &BTreeMap<String, String>) -> Formula {
        fn go(f: &Formula, map: &BTreeMap<String, String>) -> Formula {
            let look = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
            match f {
                Formula::True => Formula::True,
                Formula::False => Formula::False,
                Formula::Lab(s, x) => Formula::Lab(s.clone(), look(x)),
                Formula::Edge(g, x, y) => Formula::Edge(g.clone(), look(x), look(y)),
                Formula::In(x, s) => Formula::In(look(x), look(s)),
                Formula::Eq(x, y) => Formula::Eq(look(x), look(y)),
                Formula::Not(a) => Formula::not(go(a, map)),
                Formula::And(a, b) => Formula::and(go(a, map), go(b, map)),
                Formula::Or(a, b) => Formula::or(go(a, map), go(b, map)),
                Formula::Implies(a, b) => Formula::implies(go(a, map), go(b, map)),
                Formula::Iff(a, b) => Formula::iff(go(a, map), go(b, map)),
                Formula::Exists(s, x, a) | Formula::Forall(s, x, a) => {
                    let mut inner = map.clone();
                    inner.remove(x);
                    let body = go(a, &inner);
                    match f {
                        Formula::Exists(..) => Formula::Exists(*s, x.clone(), Box::new(body)),
                        _ => Formula::Forall(*s, x.clone(), Box::new(body)),
                    }
                }
                Formula::Apply(m, args) => {
                    Formula::Apply(*m, args.iter().map(|a| look(a)).collect())
                }
            }
        }
        go(self, map)
    }

    fn rename(&self, env: &BTreeMap<String, String>, counter: &mut usize) -> Formula {
        let look = |v: &String| env.get(v).cloned().unwrap_or_else(|| v.clone());
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Lab(s, x) => Formula::Lab(s.clone(), look(x)),
            Formula::Edge(g, x, y) => Formula::Edge(g.clone(), look(x), look(y)),
            Formula::In(x, s) => Formula::In(look(x), look(s)),
            Formula::Eq(x, y) => Formula::Eq(look(x), look(y)),
            Formula::Not(f) => Formula::not(f.rename(env, counter)),
            Formula::And(a, b) => Formula::and(a.rename(env, counter), b.rename(env, counter)),
            Formula::Or(a, b) => Formula::or(a.rename(env, counter), b.rename(env, counter)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename(env, counter), b.rename(env, counter))
            }
            Formula::Iff(a, b) => Formula::iff(a.rename(env, counter), b.rename(env, counter)),
            Formula::Exists(sort, x, f) | Formula::Forall(sort, x, f) => {
                *counter += 1;
                let fresh = format!("{}%{}", x.split('%').next().unwrap_or(x), counter);
                let mut env2 = env.clone();
                env2.insert(x.clone(), fresh.clone());
                let body = f.rename(&env2, counter);
                match self {
                    Formula::Exists(..) => Formula::Exists(*sort, fresh, Box::new(body)),
                    _ => Formula::Forall(*sort, fresh, Box::new(body)),
                }
            }
            Formula::Apply(m, args) => Formula::Apply(*m, args.iter().map(|a| look(a)).collect()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Lab(s, x) => write!(f, "(lab_{s} {x})"),
            Formula::Edge(g, x, y) => write!(f, "(edg_{g} {x} {y})"),
            Formula::In(x, s) => write!(f, "(in {x} {s})"),
            Formula::Eq(x, y) => write!(f, "(= {x} {y})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Formula::Exists(_, x, g) => write!(f, "(exists {x} {g})"),
            Formula::Forall(_, x, g) => write!(f, "(forall {x} {g})"),
            Formula::Apply(m, args) => {
                write!(f, "({}", m.name())?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
