//! Intersecting counting automata with the domain language and reading
//! off Parikh images: an automaton product for regular domains, the
//! triple construction for context-free domains, and a pair construction
//! for regular tree domains. Every path lands in a grammar over annotated
//! letters that the fixpoint engine turns into a semilinear set.

use std::collections::HashMap;

use crate::compiler::{TreeAutomaton, WordAutomaton, PAD};
use crate::error::GrammarError;
use crate::parikh::{
    weighted_parikh, ContextFreeGrammar, EngineLimits, GSym, RegularTreeGrammar, SemilinearSet,
    WeightedCfg,
};
use crate::signature::Symbol;
use crate::structures::Term;

use super::domain::DomainDfa;

/// A grammar over annotated letters (word case).
#[derive(Debug, Clone)]
pub struct AnnotatedGrammar {
    pub n_nts: usize,
    pub start: usize,
    pub prods: Vec<(usize, Vec<AnnSym>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnSym {
    Letter(u32),
    Nt(usize),
}

impl AnnotatedGrammar {
    pub fn to_weighted(&self, contrib: &[(u64, u64)]) -> WeightedCfg {
        let prods = self
            .prods
            .iter()
            .map(|(lhs, rhs)| {
                let mut w = vec![0u64; 2];
                let mut nts = Vec::new();
                for s in rhs {
                    match s {
                        AnnSym::Letter(l) => {
                            let (m, n) = contrib[*l as usize];
                            w[0] += m;
                            w[1] += n;
                        }
                        AnnSym::Nt(i) => nts.push(*i),
                    }
                }
                (*lhs, w, nts)
            })
            .collect();
        WeightedCfg {
            dim: 2,
            n_nts: self.n_nts,
            start: self.start,
            prods,
        }
    }

    /// A shortest terminal yield of the start symbol, as annotated
    /// letters.
    pub fn shortest_yield(&self) -> Option<Vec<u32>> {
        let mut best: Vec<Option<usize>> = vec![None; self.n_nts];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.prods {
                let mut len = 0usize;
                let mut ok = true;
                for s in rhs {
                    match s {
                        AnnSym::Letter(_) => len += 1,
                        AnnSym::Nt(i) => match best[*i] {
                            Some(l) => len += l,
                            None => {
                                ok = false;
                                break;
                            }
                        },
                    }
                }
                if ok && best[*lhs].is_none_or(|old| len < old) {
                    best[*lhs] = Some(len);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        best[self.start]?;
        let mut out = Vec::new();
        self.rebuild(self.start, &best, &mut out);
        Some(out)
    }

    fn rebuild(&self, nt: usize, best: &[Option<usize>], out: &mut Vec<u32>) {
        let target = best[nt].expect("witnessed");
        for (lhs, rhs) in &self.prods {
            if *lhs != nt {
                continue;
            }
            let mut len = 0usize;
            let mut ok = true;
            for s in rhs {
                match s {
                    AnnSym::Letter(_) => len += 1,
                    AnnSym::Nt(i) => match best[*i] {
                        Some(l) => len += l,
                        None => {
                            ok = false;
                            break;
                        }
                    },
                }
            }
            if ok && len == target {
                for s in rhs {
                    match s {
                        AnnSym::Letter(l) => out.push(*l),
                        AnnSym::Nt(i) => self.rebuild(*i, best, out),
                    }
                }
                return;
            }
        }
        unreachable!("a production realizes the recorded length");
    }
}

/// Product of a word automaton (over annotated letters, closed by the
/// padding shape) with a regular domain over base letters, as a
/// right-linear annotated grammar. Accepts exactly the accepted annotated
/// words whose base projection, minus the final pad, lies in the domain.
pub fn word_regular_grammar(a: &WordAutomaton, dfa: &DomainDfa) -> AnnotatedGrammar {
    let alpha = &a.alphabet;
    let pad_base = alpha.base_index(PAD).expect("word alphabet");
    // base index -> domain letter index
    let base_map: Vec<Option<usize>> = alpha
        .base
        .iter()
        .map(|b| dfa.letters.iter().position(|l| l == b))
        .collect();
    let nt = |qa: u32, qd: u32| (qa as usize) * dfa.n_states + qd as usize;
    let n_nts = a.n_states * dfa.n_states;
    let mut prods = Vec::new();
    for qa in 0..a.n_states as u32 {
        for qd in 0..dfa.n_states as u32 {
            for l in 0..alpha.len() {
                let base = alpha.base_of(l);
                let qa2 = a.step(qa, l);
                if base == pad_base {
                    if dfa.accepting[qd as usize] && a.accepting[qa2 as usize] {
                        prods.push((nt(qa, qd), vec![AnnSym::Letter(l as u32)]));
                    }
                } else if let Some(dl) = base_map[base] {
                    let qd2 = dfa.delta[qd as usize][dl];
                    prods.push((
                        nt(qa, qd),
                        vec![AnnSym::Letter(l as u32), AnnSym::Nt(nt(qa2, qd2))],
                    ));
                }
            }
        }
    }
    AnnotatedGrammar {
        n_nts,
        start: nt(a.start, dfa.start),
        prods,
    }
}

/// Split right-hand sides so no production carries more than two symbols;
/// keeps the generated language unchanged.
fn binarize(g: &ContextFreeGrammar) -> ContextFreeGrammar {
    let mut out = g.clone();
    let mut prods = Vec::new();
    for (lhs, rhs) in std::mem::take(&mut out.productions) {
        if rhs.len() <= 2 {
            prods.push((lhs, rhs));
            continue;
        }
        let mut current = lhs;
        let mut rest = rhs;
        while rest.len() > 2 {
            let head = rest.remove(0);
            let fresh = out.nonterminals.len();
            out.nonterminals.push(format!("&{}", out.nonterminals.len()));
            prods.push((current, vec![head, GSym::N(fresh)]));
            current = fresh;
        }
        prods.push((current, rest));
    }
    out.productions = prods;
    out
}

/// The triple construction: intersect a context-free domain (over base
/// letters) with a word automaton over annotated letters. Terminal
/// productions fan out over all annotated letters with the right base
/// symbol, and the final pad letter is folded into the start productions.
pub fn word_cfg_grammar(
    a: &WordAutomaton,
    cfg: &ContextFreeGrammar,
    max_productions: usize,
) -> Result<AnnotatedGrammar, GrammarError> {
    let g = binarize(&cfg.reduce());
    let alpha = &a.alphabet;
    let pad_base = alpha.base_index(PAD).expect("word alphabet");
    let s = a.n_states;
    let n_g = g.nonterminals.len();
    // triple id: (state, nonterminal, state)
    let nt = |p: u32, x: usize, q: u32| (p as usize * n_g + x) * s + q as usize;
    let n_nts = s * n_g * s + 1;
    let start_nt = s * n_g * s;
    // annotated letters by base
    let mut by_base: Vec<Vec<u32>> = vec![Vec::new(); alpha.base.len()];
    for l in 0..alpha.len() {
        by_base[alpha.base_of(l)].push(l as u32);
    }
    let term_index: HashMap<&Symbol, usize> = g
        .terminals
        .iter()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let base_of_term: Vec<Option<usize>> = g
        .terminals
        .iter()
        .map(|t| alpha.base.iter().position(|b| b == t))
        .collect();
    let _ = term_index;

    let mut prods: Vec<(usize, Vec<AnnSym>)> = Vec::new();
    let push = |prods: &mut Vec<(usize, Vec<AnnSym>)>, p: (usize, Vec<AnnSym>)| {
        prods.push(p);
        if prods.len() > max_productions {
            return Err(GrammarError::Budget("triple construction".into()));
        }
        Ok(())
    };
    // start: read the domain word from a.start to some q, then the pad.
    for q in 0..s as u32 {
        for &pl in &by_base[pad_base] {
            let q2 = a.step(q, pl as usize);
            if a.accepting[q2 as usize] {
                push(
                    &mut prods,
                    (
                        start_nt,
                        vec![AnnSym::Nt(nt(a.start, g.start, q)), AnnSym::Letter(pl)],
                    ),
                )?;
            }
        }
    }
    for (lhs, rhs) in &g.productions {
        match rhs.len() {
            0 => {
                for p in 0..s as u32 {
                    push(&mut prods, (nt(p, *lhs, p), vec![]))?;
                }
            }
            1 => match &rhs[0] {
                GSym::N(b) => {
                    for p in 0..s as u32 {
                        for q in 0..s as u32 {
                            push(
                                &mut prods,
                                (nt(p, *lhs, q), vec![AnnSym::Nt(nt(p, *b, q))]),
                            )?;
                        }
                    }
                }
                GSym::T(t) => {
                    if let Some(base) = base_of_term[*t] {
                        for p in 0..s as u32 {
                            for &l in &by_base[base] {
                                let q = a.step(p, l as usize);
                                push(&mut prods, (nt(p, *lhs, q), vec![AnnSym::Letter(l)]))?;
                            }
                        }
                    }
                }
            },
            2 => {
                // expand each side to (entry letters | nonterminal triples)
                for p in 0..s as u32 {
                    // all ways to realize rhs[0] from p to r
                    let firsts: Vec<(u32, AnnSym)> = match &rhs[0] {
                        GSym::T(t) => match base_of_term[*t] {
                            Some(base) => by_base[base]
                                .iter()
                                .map(|&l| (a.step(p, l as usize), AnnSym::Letter(l)))
                                .collect(),
                            None => Vec::new(),
                        },
                        GSym::N(b) => (0..s as u32)
                            .map(|r| (r, AnnSym::Nt(nt(p, *b, r))))
                            .collect(),
                    };
                    for (r, first) in firsts {
                        let seconds: Vec<(u32, AnnSym)> = match &rhs[1] {
                            GSym::T(t) => match base_of_term[*t] {
                                Some(base) => by_base[base]
                                    .iter()
                                    .map(|&l| (a.step(r, l as usize), AnnSym::Letter(l)))
                                    .collect(),
                                None => Vec::new(),
                            },
                            GSym::N(b) => (0..s as u32)
                                .map(|q| (q, AnnSym::Nt(nt(r, *b, q))))
                                .collect(),
                        };
                        for (q, second) in seconds {
                            push(&mut prods, (nt(p, *lhs, q), vec![first, second]))?;
                        }
                    }
                }
            }
            _ => unreachable!("binarized"),
        }
    }
    Ok(AnnotatedGrammar {
        n_nts,
        start: start_nt,
        prods,
    })
}

/// A grammar over annotated ranked letters (tree case): productions carry
/// the letter and the child nonterminals.
#[derive(Debug, Clone)]
pub struct AnnotatedTreeGrammar {
    pub n_nts: usize,
    pub start: usize,
    pub prods: Vec<(usize, u32, Vec<usize>)>,
}

impl AnnotatedTreeGrammar {
    pub fn to_weighted(&self, contrib: &[(u64, u64)]) -> WeightedCfg {
        let prods = self
            .prods
            .iter()
            .map(|(lhs, l, children)| {
                let (m, n) = contrib[*l as usize];
                (*lhs, vec![m, n], children.clone())
            })
            .collect();
        WeightedCfg {
            dim: 2,
            n_nts: self.n_nts,
            start: self.start,
            prods,
        }
    }

    /// A smallest tree generated from the start symbol, decoded through
    /// the automaton alphabet.
    pub fn smallest_term(&self, ta: &TreeAutomaton) -> Option<Term> {
        let mut best: Vec<Option<usize>> = vec![None; self.n_nts];
        loop {
            let mut changed = false;
            for (lhs, _, children) in &self.prods {
                let size: Option<usize> = children.iter().map(|&c| best[c]).sum::<Option<usize>>();
                if let Some(sz) = size {
                    if best[*lhs].is_none_or(|old| sz + 1 < old) {
                        best[*lhs] = Some(sz + 1);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        best[self.start]?;
        Some(self.rebuild(self.start, &best, ta))
    }

    fn rebuild(&self, nt: usize, best: &[Option<usize>], ta: &TreeAutomaton) -> Term {
        let target = best[nt].expect("witnessed");
        for (lhs, l, children) in &self.prods {
            if *lhs != nt {
                continue;
            }
            let size: Option<usize> = children.iter().map(|&c| best[c]).sum::<Option<usize>>();
            if size.map(|s| s + 1) == Some(target) {
                let base = ta.alphabet.base_of(*l as usize);
                return Term {
                    symbol: ta.alphabet.base[base].clone(),
                    children: children.iter().map(|&c| self.rebuild(c, best, ta)).collect(),
                };
            }
        }
        unreachable!("a production realizes the recorded size");
    }
}

/// Pair construction intersecting a bottom-up tree automaton over
/// annotated symbols with a regular tree grammar over base symbols.
pub fn tree_rtg_grammar(
    ta: &TreeAutomaton,
    rtg: &RegularTreeGrammar,
    max_productions: usize,
) -> Result<AnnotatedTreeGrammar, GrammarError> {
    let alpha = &ta.alphabet;
    let mut by_base: Vec<Vec<u32>> = vec![Vec::new(); alpha.base.len()];
    for l in 0..alpha.len() {
        by_base[alpha.base_of(l)].push(l as u32);
    }
    let base_of_sym: Vec<Option<usize>> = rtg
        .productions
        .iter()
        .map(|(_, sym, _)| alpha.base.iter().position(|b| b == sym))
        .collect();

    // pairs (rtg nonterminal, automaton state), discovered bottom-up
    let mut index: HashMap<(usize, u32), usize> = HashMap::new();
    let mut pairs: Vec<(usize, u32)> = Vec::new();
    let mut prods: Vec<(usize, u32, Vec<usize>)> = Vec::new();
    let add_pair = |key: (usize, u32), pairs: &mut Vec<(usize, u32)>, index: &mut HashMap<(usize, u32), usize>| -> usize {
        match index.get(&key) {
            Some(&i) => i,
            None => {
                let i = pairs.len();
                index.insert(key, i);
                pairs.push(key);
                i
            }
        }
    };
    loop {
        let known_pairs = pairs.len();
        let known_prods = prods.len();
        for (pi, (rule, (rn, _, children))) in rtg.productions.iter().enumerate().map(|(i, p)| (i, (i, p))) {
            let _ = rule;
            let base = match base_of_sym[pi] {
                Some(b) => b,
                None => continue,
            };
            // all assignments of discovered pairs to the children matching
            // the child nonterminals
            let cands: Vec<Vec<usize>> = children
                .iter()
                .map(|&cn| {
                    (0..pairs.len())
                        .filter(|&i| pairs[i].0 == cn)
                        .collect::<Vec<usize>>()
                })
                .collect();
            if cands.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut choice = vec![0usize; cands.len()];
            loop {
                let child_ids: Vec<usize> = choice.iter().zip(&cands).map(|(&c, list)| list[c]).collect();
                let child_states: Vec<u32> = child_ids.iter().map(|&i| pairs[i].1).collect();
                for &l in &by_base[base] {
                    let q = ta.step(l, &child_states);
                    let lhs = add_pair((*rn, q), &mut pairs, &mut index);
                    let prod = (lhs, l, child_ids.clone());
                    if !prods.contains(&prod) {
                        prods.push(prod);
                        if prods.len() > max_productions {
                            return Err(GrammarError::Budget("tree pair construction".into()));
                        }
                    }
                }
                // odometer
                let mut pos = 0;
                loop {
                    if pos == cands.len() {
                        break;
                    }
                    choice[pos] += 1;
                    if choice[pos] < cands[pos].len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
                if pos == cands.len() {
                    break;
                }
            }
        }
        if pairs.len() == known_pairs && prods.len() == known_prods {
            break;
        }
    }
    // fresh start feeding every accepting pair of the start nonterminal
    let start = pairs.len();
    let mut out_prods: Vec<(usize, u32, Vec<usize>)> = prods;
    let mut any = false;
    for (i, &(rn, q)) in pairs.iter().enumerate() {
        if rn == rtg.start && ta.accepting[q as usize] {
            // a unit production start -> pair; tree grammars have no unit
            // shape, so connect through every production of the pair
            for (lhs, l, children) in out_prods.clone() {
                if lhs == i {
                    out_prods.push((start, l, children));
                    any = true;
                }
            }
        }
    }
    let _ = any;
    Ok(AnnotatedTreeGrammar {
        n_nts: start + 1,
        start,
        prods: out_prods,
    })
}

/// Parikh image of an annotated word grammar under a contribution map.
pub fn grammar_parikh(
    g: &AnnotatedGrammar,
    contrib: &[(u64, u64)],
    limits: &EngineLimits,
) -> Result<SemilinearSet, GrammarError> {
    weighted_parikh(&g.to_weighted(contrib), limits)
}

/// Parikh image of an annotated tree grammar under a contribution map.
pub fn tree_grammar_parikh(
    g: &AnnotatedTreeGrammar,
    contrib: &[(u64, u64)],
    limits: &EngineLimits,
) -> Result<SemilinearSet, GrammarError> {
    weighted_parikh(&g.to_weighted(contrib), limits)
}
