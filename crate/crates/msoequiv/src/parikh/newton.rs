//! Exact Parikh images of context-free grammars.
//!
//! The grammar induces a system of set equations over the commutative
//! idempotent semiring of subsets of N^d, whose least solution at the
//! start symbol is the Parikh image. Newton iteration solves it: each
//! round solves the linearization of the system around the current value,
//! which is a right-linear system solved exactly by Gaussian elimination
//! with Kleene star. For n nonterminals the n-th iterate already equals
//! the least fixpoint, and a sufficient pre-fixpoint test usually stops
//! the loop after two or three rounds. Every value computed along the way
//! is semilinear, so the result is exact, not approximated.

use std::collections::HashMap;
use std::time::Instant;

use crate::error::GrammarError;
use crate::parikh::grammar::{ContextFreeGrammar, GSym};
use crate::parikh::semilinear::SemilinearSet;

/// A grammar whose terminals have been folded into one weight vector per
/// production: the Parikh contribution of the production's terminal part.
#[derive(Debug, Clone)]
pub struct WeightedCfg {
    pub dim: usize,
    pub n_nts: usize,
    pub start: usize,
    /// (left-hand side, terminal weight, nonterminal occurrences)
    pub prods: Vec<(usize, Vec<u64>, Vec<usize>)>,
}

#[derive(Debug, Clone)]
pub struct EngineLimits {
    pub deadline: Option<Instant>,
    /// Cap on linear sets per intermediate value.
    pub max_parts: usize,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            deadline: None,
            max_parts: 100_000,
        }
    }
}

impl EngineLimits {
    fn check(&self, parts: usize, stage: &str) -> Result<(), GrammarError> {
        if parts > self.max_parts {
            return Err(GrammarError::Budget(format!("{stage}: representation size")));
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(GrammarError::Budget(format!("{stage}: deadline")));
            }
        }
        Ok(())
    }
}

impl WeightedCfg {
    pub fn from_cfg(g: &ContextFreeGrammar) -> WeightedCfg {
        let dim = g.terminals.len();
        let prods = g
            .productions
            .iter()
            .map(|(lhs, rhs)| {
                let mut w = vec![0u64; dim];
                let mut nts = Vec::new();
                for s in rhs {
                    match s {
                        GSym::T(t) => w[*t] += 1,
                        GSym::N(i) => nts.push(*i),
                    }
                }
                (*lhs, w, nts)
            })
            .collect();
        WeightedCfg {
            dim,
            n_nts: g.nonterminals.len(),
            start: g.start,
            prods,
        }
    }

    /// Drop nonterminals that are unproductive or unreachable.
    pub fn reduce(&self) -> WeightedCfg {
        let n = self.n_nts;
        let mut productive = vec![false; n];
        loop {
            let mut changed = false;
            for (lhs, _, nts) in &self.prods {
                if !productive[*lhs] && nts.iter().all(|&i| productive[i]) {
                    productive[*lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut reachable = vec![false; n];
        reachable[self.start] = true;
        loop {
            let mut changed = false;
            for (lhs, _, nts) in &self.prods {
                if reachable[*lhs] && nts.iter().all(|&i| productive[i]) {
                    for &i in nts {
                        if !reachable[i] {
                            reachable[i] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut count = 0usize;
        for i in 0..n {
            if (productive[i] && reachable[i]) || i == self.start {
                map[i] = count;
                count += 1;
            }
        }
        let prods = self
            .prods
            .iter()
            .filter(|(lhs, _, nts)| {
                (map[*lhs] != usize::MAX) && nts.iter().all(|&i| productive[i] && reachable[i])
            })
            .map(|(lhs, w, nts)| (map[*lhs], w.clone(), nts.iter().map(|&i| map[i]).collect()))
            .collect();
        WeightedCfg {
            dim: self.dim,
            n_nts: count,
            start: map[self.start],
            prods,
        }
    }
}

/// Parikh image of the start symbol's language, exactly.
pub fn weighted_parikh(
    g: &WeightedCfg,
    limits: &EngineLimits,
) -> Result<SemilinearSet, GrammarError> {
    let g = g.reduce();
    let n = g.n_nts;
    let dim = g.dim;
    if g.prods.is_empty() {
        return Ok(SemilinearSet::empty(dim));
    }
    // nu^0 = value of terminal-only productions
    let mut nu: Vec<SemilinearSet> = vec![SemilinearSet::empty(dim); n];
    for (lhs, w, nts) in &g.prods {
        if nts.is_empty() {
            nu[*lhs] = nu[*lhs].union(&SemilinearSet::point(w.clone()))?;
        }
    }
    let linear = g.prods.iter().all(|(_, _, nts)| nts.len() <= 1);
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        // Linearize around nu: constants f(nu), edges from the Jacobian.
        let mut consts: Vec<SemilinearSet> = vec![SemilinearSet::empty(dim); n];
        let mut edges: HashMap<(usize, usize), SemilinearSet> = HashMap::new();
        for (lhs, w, nts) in &g.prods {
            // constant: w + sum of nu over all occurrences
            let mut c = SemilinearSet::point(w.clone());
            for &b in nts {
                c = c.sum(&nu[b])?;
                if c.is_empty() {
                    break;
                }
            }
            if !c.is_empty() {
                consts[*lhs] = consts[*lhs].union(&c)?;
            }
            // Jacobian: remove one occurrence of each distinct nonterminal
            let mut distinct = nts.clone();
            distinct.sort_unstable();
            distinct.dedup();
            for &b in &distinct {
                let mut term = SemilinearSet::point(w.clone());
                let mut skipped = false;
                let mut ok = true;
                for &c2 in nts {
                    if c2 == b && !skipped {
                        skipped = true;
                        continue;
                    }
                    term = term.sum(&nu[c2])?;
                    if term.is_empty() {
                        ok = false;
                        break;
                    }
                }
                if ok && !term.is_empty() {
                    let slot = edges
                        .entry((*lhs, b))
                        .or_insert_with(|| SemilinearSet::empty(dim));
                    *slot = slot.union(&term)?;
                }
            }
            limits.check(consts[*lhs].parts.len(), "parikh fixpoint")?;
        }
        let next = solve_linear_system(n, dim, consts, edges, limits)?;
        // Pre-fixpoint certificate: f(next) contained in next part-wise.
        let mut fixed = true;
        'outer: for (lhs, w, nts) in &g.prods {
            let mut v = SemilinearSet::point(w.clone());
            for &b in nts {
                v = v.sum(&next[b])?;
                if v.is_empty() {
                    break;
                }
            }
            for part in &v.parts {
                let covered = next[*lhs]
                    .parts
                    .iter()
                    .any(|k| part_subsumed(part, k));
                if !covered {
                    fixed = false;
                    break 'outer;
                }
            }
        }
        nu = next;
        if fixed || rounds >= n || linear {
            return Ok(nu[g.start].clone());
        }
        limits.check(0, "parikh fixpoint")?;
    }
}

fn part_subsumed(
    a: &crate::parikh::semilinear::LinearSet,
    b: &crate::parikh::semilinear::LinearSet,
) -> bool {
    b.contains(&a.base)
        && a.periods
            .iter()
            .all(|p| crate::parikh::semilinear::in_span(p, &b.periods))
}

/// Least solution of X_i = C_i | union_j (E_ij + X_j) at every unknown,
/// by sparse Gaussian elimination in the semilinear Kleene algebra.
pub fn solve_linear_system(
    n: usize,
    dim: usize,
    mut consts: Vec<SemilinearSet>,
    mut edges: HashMap<(usize, usize), SemilinearSet>,
    limits: &EngineLimits,
) -> Result<Vec<SemilinearSet>, GrammarError> {
    edges.retain(|_, s| !s.is_empty());
    let order: Vec<usize> = elimination_order(n, &edges);
    let mut eliminated = vec![false; n];
    // Forward elimination, remembering each node's equation at removal.
    let mut solved: Vec<(usize, Vec<(usize, SemilinearSet)>, SemilinearSet)> = Vec::new();
    for &i in &order {
        // self loop
        if let Some(e) = edges.remove(&(i, i)) {
            let s = e.star();
            consts[i] = s.sum(&consts[i])?;
            let outs: Vec<usize> = edges
                .keys()
                .filter(|(f, t)| *f == i && *t != i)
                .map(|(_, t)| *t)
                .collect();
            for t in outs {
                let e2 = edges.remove(&(i, t)).unwrap();
                edges.insert((i, t), s.sum(&e2)?);
            }
        }
        let outs: Vec<(usize, SemilinearSet)> = edges
            .iter()
            .filter(|((f, _), _)| *f == i)
            .map(|((_, t), s)| (*t, s.clone()))
            .collect();
        solved.push((i, outs.clone(), consts[i].clone()));
        let ins: Vec<(usize, SemilinearSet)> = edges
            .iter()
            .filter(|((_, t), _)| *t == i)
            .map(|((f, _), s)| (*f, s.clone()))
            .collect();
        for (k, eki) in &ins {
            let c = eki.sum(&consts[i])?;
            consts[*k] = consts[*k].union(&c)?;
            for (j, eij) in &outs {
                let through = eki.sum(eij)?;
                match edges.get_mut(&(*k, *j)) {
                    Some(slot) => *slot = slot.union(&through)?,
                    None => {
                        edges.insert((*k, *j), through);
                    }
                }
                limits.check(edges[&(*k, *j)].parts.len(), "linear solve")?;
            }
        }
        edges.retain(|(f, t), _| *f != i && *t != i);
        eliminated[i] = true;
        limits.check(consts[i].parts.len(), "linear solve")?;
    }
    // Back-substitution in reverse elimination order.
    let mut value: Vec<SemilinearSet> = vec![SemilinearSet::empty(dim); n];
    for (i, outs, c) in solved.into_iter().rev() {
        let mut v = c;
        for (j, e) in outs {
            if !value[j].is_empty() {
                v = v.union(&e.sum(&value[j])?)?;
            }
        }
        value[i] = v;
    }
    Ok(value)
}

/// Min-degree-first heuristic for the elimination order.
fn elimination_order(n: usize, edges: &HashMap<(usize, usize), SemilinearSet>) -> Vec<usize> {
    let mut degree = vec![(0usize, 0usize); n];
    for (f, t) in edges.keys() {
        degree[*f].1 += 1;
        degree[*t].0 += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| degree[i].0 * degree[i].1);
    order
}

/// Parikh image of a context-free grammar over its terminal ordering.
pub fn cfg_parikh(g: &ContextFreeGrammar) -> Result<SemilinearSet, GrammarError> {
    cfg_parikh_limited(g, &EngineLimits::default())
}

pub fn cfg_parikh_limited(
    g: &ContextFreeGrammar,
    limits: &EngineLimits,
) -> Result<SemilinearSet, GrammarError> {
    let reduced = g.reduce();
    weighted_parikh(&WeightedCfg::from_cfg(&reduced), limits)
}

/// Least n with (n,n) in the set, if any: intersect with the diagonal and
/// read off the smallest base.
pub fn diagonal_nonempty(s: &SemilinearSet) -> Result<Option<u64>, GrammarError> {
    if s.dim != 2 {
        return Err(GrammarError::DimensionMismatch(s.dim, 2));
    }
    let diag = SemilinearSet::from_parts(
        2,
        vec![crate::parikh::semilinear::LinearSet {
            base: vec![0, 0],
            periods: vec![vec![1, 1]],
        }],
    );
    let inter = s.intersect(&diag)?;
    Ok(inter.parts.iter().map(|l| l.base[0]).min())
}
