//! Direct Tarskian model checking of MSO formulas on graphs.
//!
//! Set quantifiers enumerate all subsets of the node set, so this is the
//! small-instance oracle, not the production evaluation path. Enumeration
//! refuses graphs above a configurable node cap instead of silently
//! running.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::FormulaError;
use crate::formulas::ast::{Formula, Macro, Sort};
use crate::structures::{Graph, NodeId};

/// Default node cap for set-quantifier enumeration.
pub const DEFAULT_SET_CAP: usize = 12;

/// Valuation of the free variables of a formula.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub nodes: BTreeMap<String, NodeId>,
    pub sets: BTreeMap<String, BTreeSet<NodeId>>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn node(mut self, var: &str, v: NodeId) -> Self {
        self.nodes.insert(var.to_string(), v);
        self
    }

    pub fn set(mut self, var: &str, s: impl IntoIterator<Item = NodeId>) -> Self {
        self.sets.insert(var.to_string(), s.into_iter().collect());
        self
    }
}

/// `check(f, g, a)` with the default set-quantifier cap.
pub fn check(f: &Formula, g: &Graph, a: &Assignment) -> Result<bool, FormulaError> {
    check_with_cap(f, g, a, DEFAULT_SET_CAP)
}

pub fn check_with_cap(
    f: &Formula,
    g: &Graph,
    a: &Assignment,
    set_cap: usize,
) -> Result<bool, FormulaError> {
    let mut env = Env {
        nodes: a.nodes.clone(),
        sets: a.sets.clone(),
    };
    eval(f, g, &mut env, set_cap)
}

struct Env {
    nodes: BTreeMap<String, NodeId>,
    sets: BTreeMap<String, BTreeSet<NodeId>>,
}

impl Env {
    fn node(&self, v: &str) -> Result<NodeId, FormulaError> {
        self.nodes
            .get(v)
            .copied()
            .ok_or_else(|| FormulaError::Unbound(v.to_string()))
    }

    fn set(&self, v: &str) -> Result<&BTreeSet<NodeId>, FormulaError> {
        self.sets
            .get(v)
            .ok_or_else(|| FormulaError::Unbound(v.to_string()))
    }
}

fn eval(f: &Formula, g: &Graph, env: &mut Env, cap: usize) -> Result<bool, FormulaError> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Lab(s, x) => Ok(g.label(env.node(x)?) == s),
        Formula::Edge(l, x, y) => Ok(g.has_edge(env.node(x)?, l, env.node(y)?)),
        Formula::In(x, set) => {
            let v = env.node(x)?;
            Ok(env.set(set)?.contains(&v))
        }
        Formula::Eq(x, y) => Ok(env.node(x)? == env.node(y)?),
        Formula::Not(a) => Ok(!eval(a, g, env, cap)?),
        Formula::And(a, b) => Ok(eval(a, g, env, cap)? && eval(b, g, env, cap)?),
        Formula::Or(a, b) => Ok(eval(a, g, env, cap)? || eval(b, g, env, cap)?),
        Formula::Implies(a, b) => Ok(!eval(a, g, env, cap)? || eval(b, g, env, cap)?),
        Formula::Iff(a, b) => Ok(eval(a, g, env, cap)? == eval(b, g, env, cap)?),
        Formula::Exists(Sort::Node, x, body) => {
            let saved = env.nodes.get(x).copied();
            let mut found = false;
            for v in g.nodes() {
                env.nodes.insert(x.clone(), v);
                if eval(body, g, env, cap)? {
                    found = true;
                    break;
                }
            }
            restore_node(env, x, saved);
            Ok(found)
        }
        Formula::Forall(Sort::Node, x, body) => {
            let saved = env.nodes.get(x).copied();
            let mut holds = true;
            for v in g.nodes() {
                env.nodes.insert(x.clone(), v);
                if !eval(body, g, env, cap)? {
                    holds = false;
                    break;
                }
            }
            restore_node(env, x, saved);
            Ok(holds)
        }
        Formula::Exists(Sort::NodeSet, x, body) => {
            let saved = env.sets.get(x).cloned();
            let mut found = false;
            for s in subsets(g, cap)? {
                env.sets.insert(x.clone(), s);
                if eval(body, g, env, cap)? {
                    found = true;
                    break;
                }
            }
            restore_set(env, x, saved);
            Ok(found)
        }
        Formula::Forall(Sort::NodeSet, x, body) => {
            let saved = env.sets.get(x).cloned();
            let mut holds = true;
            for s in subsets(g, cap)? {
                env.sets.insert(x.clone(), s);
                if !eval(body, g, env, cap)? {
                    holds = false;
                    break;
                }
            }
            restore_set(env, x, saved);
            Ok(holds)
        }
        Formula::Apply(m, args) => eval_macro(*m, args, g, env),
    }
}

fn restore_node(env: &mut Env, x: &str, saved: Option<NodeId>) {
    match saved {
        Some(v) => {
            env.nodes.insert(x.to_string(), v);
        }
        None => {
            env.nodes.remove(x);
        }
    }
}

fn restore_set(env: &mut Env, x: &str, saved: Option<BTreeSet<NodeId>>) {
    match saved {
        Some(v) => {
            env.sets.insert(x.to_string(), v);
        }
        None => {
            env.sets.remove(x);
        }
    }
}

fn subsets(g: &Graph, cap: usize) -> Result<Vec<BTreeSet<NodeId>>, FormulaError> {
    let n = g.node_count();
    if n > cap {
        return Err(FormulaError::OracleCapExceeded(n, cap));
    }
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u64..(1 << n) {
        out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
    }
    Ok(out)
}

/// Macros get their operational meaning here; the agreement with their
/// second-order expansions is checked by tests.
fn eval_macro(m: Macro, args: &[String], g: &Graph, env: &Env) -> Result<bool, FormulaError> {
    match m {
        Macro::Singleton => Ok(env.set(&args[0])?.len() == 1),
        Macro::Reach => {
            let from = env.node(&args[0])?;
            let to = env.node(&args[1])?;
            Ok(bfs_reaches(g, from, to))
        }
        Macro::Root => Ok(g.in_degree(env.node(&args[0])?) == 0),
        Macro::PreordSucc => {
            let x = env.node(&args[0])?;
            let y = env.node(&args[1])?;
            let order = preorder_of(g).ok_or_else(|| {
                FormulaError::Parse {
                    line: 0,
                    col: 0,
                    msg: "preord applies only to tree graphs".into(),
                }
            })?;
            let px = order.iter().position(|&v| v == x);
            let py = order.iter().position(|&v| v == y);
            Ok(match (px, py) {
                (Some(i), Some(j)) => j == i + 1,
                _ => false,
            })
        }
    }
}

/// Breadth-first reachability along edges of any label; reflexive.
pub fn bfs_reaches(g: &Graph, from: NodeId, to: NodeId) -> bool {
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        for (_, _, t) in g.out_edges(v) {
            if seen.insert(*t) {
                queue.push_back(*t);
            }
        }
    }
    false
}

/// Pre-order node sequence of a tree-shaped graph, following child edges in
/// numeric label order. None if the graph has no unique root.
fn preorder_of(g: &Graph) -> Option<Vec<NodeId>> {
    let roots: Vec<_> = g.nodes().filter(|&v| g.in_degree(v) == 0).collect();
    if roots.len() != 1 {
        return None;
    }
    let mut order = Vec::new();
    let mut stack = vec![roots[0]];
    let mut guard = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        guard += 1;
        if guard > g.node_count() {
            return None;
        }
        let mut children: Vec<(usize, NodeId)> = g
            .out_edges(v)
            .filter_map(|(_, l, t)| l.parse::<usize>().ok().map(|i| (i, *t)))
            .collect();
        children.sort();
        for (_, c) in children.into_iter().rev() {
            stack.push(c);
        }
    }
    Some(order)
}
