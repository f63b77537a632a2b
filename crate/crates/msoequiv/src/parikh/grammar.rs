//! Context-free grammars and regular tree grammars, with the text formats
//! used by the command line.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::GrammarError;
use crate::signature::{Signature, Symbol};

/// Grammar symbol: terminal or nonterminal index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GSym {
    T(usize),
    N(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextFreeGrammar {
    pub terminals: Vec<Symbol>,
    pub nonterminals: Vec<Symbol>,
    pub start: usize,
    pub productions: Vec<(usize, Vec<GSym>)>,
}

impl ContextFreeGrammar {
    /// Parse the `.cfg` format: a `start:` line and production lines
    /// `S -> a S b | ε`. Symbols are whitespace-separated; every symbol
    /// appearing on a left-hand side is a nonterminal.
    pub fn parse(text: &str) -> Result<ContextFreeGrammar, GrammarError> {
        let mut start_name: Option<String> = None;
        let mut raw: Vec<(String, Vec<Vec<String>>)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("start:") {
                start_name = Some(rest.trim().to_string());
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| GrammarError::Parse(format!("expected `->` in `{line}`")))?;
            let lhs = lhs.trim().to_string();
            if lhs.split_whitespace().count() != 1 {
                return Err(GrammarError::Parse(format!(
                    "left-hand side must be one nonterminal, got `{lhs}`"
                )));
            }
            let alts: Vec<Vec<String>> = rhs
                .split('|')
                .map(|alt| {
                    alt.split_whitespace()
                        .map(|s| s.to_string())
                        .filter(|s| s != "ε" && s != "eps")
                        .collect()
                })
                .collect();
            raw.push((lhs, alts));
        }
        let start_name =
            start_name.ok_or_else(|| GrammarError::Parse("missing `start:` line".into()))?;
        let nonterminals: Vec<Symbol> = {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for (lhs, _) in &raw {
                if seen.insert(lhs.clone()) {
                    out.push(lhs.clone());
                }
            }
            out
        };
        let mut terminals: Vec<Symbol> = Vec::new();
        for (_, alts) in &raw {
            for alt in alts {
                for s in alt {
                    if !nonterminals.contains(s) && !terminals.contains(s) {
                        terminals.push(s.clone());
                    }
                }
            }
        }
        let start = nonterminals
            .iter()
            .position(|n| *n == start_name)
            .ok_or(GrammarError::BadStart(start_name))?;
        let mut productions = Vec::new();
        for (lhs, alts) in raw {
            let l = nonterminals.iter().position(|n| *n == lhs).unwrap();
            for alt in alts {
                let rhs = alt
                    .iter()
                    .map(|s| {
                        if let Some(i) = nonterminals.iter().position(|n| n == s) {
                            GSym::N(i)
                        } else {
                            GSym::T(terminals.iter().position(|t| t == s).unwrap())
                        }
                    })
                    .collect();
                productions.push((l, rhs));
            }
        }
        Ok(ContextFreeGrammar {
            terminals,
            nonterminals,
            start,
            productions,
        })
    }

    /// Remove unproductive and unreachable nonterminals (and their
    /// productions). The start symbol is kept even when useless; a grammar
    /// whose start is unproductive simply has no productions left.
    pub fn reduce(&self) -> ContextFreeGrammar {
        let n = self.nonterminals.len();
        let mut productive = vec![false; n];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.productions {
                if !productive[*lhs]
                    && rhs.iter().all(|s| match s {
                        GSym::T(_) => true,
                        GSym::N(i) => productive[*i],
                    })
                {
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
            for (lhs, rhs) in &self.productions {
                if reachable[*lhs]
                    && rhs.iter().all(|s| match s {
                        GSym::T(_) => true,
                        GSym::N(i) => productive[*i],
                    })
                {
                    for s in rhs {
                        if let GSym::N(i) = s {
                            if !reachable[*i] {
                                reachable[*i] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<bool> = (0..n).map(|i| productive[i] && reachable[i]).collect();
        let mut map = vec![usize::MAX; n];
        let mut names = Vec::new();
        for i in 0..n {
            if keep[i] || i == self.start {
                map[i] = names.len();
                names.push(self.nonterminals[i].clone());
            }
        }
        let productions = self
            .productions
            .iter()
            .filter(|(lhs, rhs)| {
                (keep[*lhs] || *lhs == self.start)
                    && rhs.iter().all(|s| match s {
                        GSym::T(_) => true,
                        GSym::N(i) => keep[*i],
                    })
            })
            .map(|(lhs, rhs)| {
                (
                    map[*lhs],
                    rhs.iter()
                        .map(|s| match s {
                            GSym::T(t) => GSym::T(*t),
                            GSym::N(i) => GSym::N(map[*i]),
                        })
                        .collect(),
                )
            })
            .collect();
        ContextFreeGrammar {
            terminals: self.terminals.clone(),
            nonterminals: names,
            start: map[self.start],
            productions,
        }
    }
}

impl fmt::Display for ContextFreeGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.nonterminals[self.start])?;
        for (lhs, rhs) in &self.productions {
            write!(f, "{} ->", self.nonterminals[*lhs])?;
            if rhs.is_empty() {
                write!(f, " ε")?;
            }
            for s in rhs {
                match s {
                    GSym::T(t) => write!(f, " {}", self.terminals[*t])?,
                    GSym::N(i) => write!(f, " {}", self.nonterminals[*i])?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularTreeGrammar {
    pub signature: Signature,
    pub nonterminals: Vec<Symbol>,
    pub start: usize,
    /// Productions N -> sigma(N1..Nk).
    pub productions: Vec<(usize, Symbol, Vec<usize>)>,
}

impl RegularTreeGrammar {
    /// Parse the `.rtg` format: `start: S` then lines `S -> f(A,A) | a`.
    pub fn parse(text: &str) -> Result<RegularTreeGrammar, GrammarError> {
        let mut start_name: Option<String> = None;
        let mut raw: Vec<(String, String)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("start:") {
                start_name = Some(rest.trim().to_string());
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| GrammarError::Parse(format!("expected `->` in `{line}`")))?;
            for alt in rhs.split('|') {
                raw.push((lhs.trim().to_string(), alt.trim().to_string()));
            }
        }
        let start_name =
            start_name.ok_or_else(|| GrammarError::Parse("missing `start:` line".into()))?;
        let nonterminals: Vec<Symbol> = {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for (lhs, _) in &raw {
                if seen.insert(lhs.clone()) {
                    out.push(lhs.clone());
                }
            }
            out
        };
        let mut productions = Vec::new();
        let mut symbols: Vec<(Symbol, usize)> = Vec::new();
        for (lhs, alt) in &raw {
            let l = nonterminals.iter().position(|n| n == lhs).unwrap();
            let (sym, args) = match alt.split_once('(') {
                Some((sym, rest)) => {
                    let inner = rest.trim_end_matches(')');
                    let args: Vec<String> = inner
                        .split(',')
                        .map(|a| a.trim().to_string())
                        .filter(|a| !a.is_empty())
                        .collect();
                    (sym.trim().to_string(), args)
                }
                None => (alt.trim().to_string(), Vec::new()),
            };
            let children = args
                .iter()
                .map(|a| {
                    nonterminals
                        .iter()
                        .position(|n| n == a)
                        .ok_or_else(|| GrammarError::UndeclaredSymbol(a.clone()))
                })
                .collect::<Result<Vec<usize>, _>>()?;
            match symbols.iter().find(|(s, _)| *s == sym) {
                Some((_, r)) if *r != children.len() => {
                    return Err(GrammarError::Parse(format!(
                        "symbol {sym} used with ranks {r} and {}",
                        children.len()
                    )))
                }
                Some(_) => {}
                None => symbols.push((sym.clone(), children.len())),
            }
            productions.push((l, sym, children));
        }
        let start = nonterminals
            .iter()
            .position(|n| *n == start_name)
            .ok_or(GrammarError::BadStart(start_name))?;
        let ranked: Vec<(&str, usize)> = symbols.iter().map(|(s, r)| (s.as_str(), *r)).collect();
        Ok(RegularTreeGrammar {
            signature: Signature::tree(&ranked),
            nonterminals,
            start,
            productions,
        })
    }
}

/// The node-label word grammar of a regular tree grammar: a production
/// N -> sigma(N1..Nk) becomes N -> sigma N1..Nk, so the Parikh image of
/// the node labels is preserved.
pub fn rtg_to_cfg(t: &RegularTreeGrammar) -> ContextFreeGrammar {
    let terminals: Vec<Symbol> = t.signature.node_labels.clone();
    let productions = t
        .productions
        .iter()
        .map(|(lhs, sym, children)| {
            let mut rhs = Vec::with_capacity(children.len() + 1);
            rhs.push(GSym::T(
                terminals.iter().position(|x| x == sym).expect("declared"),
            ));
            rhs.extend(children.iter().map(|&c| GSym::N(c)));
            (*lhs, rhs)
        })
        .collect();
    ContextFreeGrammar {
        terminals,
        nonterminals: t.nonterminals.clone(),
        start: t.start,
        productions,
    }
}
