//! Domain languages restricting the equivalence question: regular
//! expressions and context-free grammars over the input letters, or
//! regular tree grammars over the input symbols.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::DecideError;
use crate::parikh::{ContextFreeGrammar, RegularTreeGrammar};
use crate::signature::{Signature, Symbol};

#[derive(Debug, Clone)]
pub enum DomainSpec {
    Regex { alphabet: Vec<Symbol>, dfa: DomainDfa },
    Cfg(ContextFreeGrammar),
    Rtg(RegularTreeGrammar),
}

impl DomainSpec {
    pub fn regex(pattern: &str, alphabet: &[Symbol]) -> Result<DomainSpec, DecideError> {
        let ast = RegexAst::parse(pattern, alphabet)
            .map_err(|e| DecideError::DomainMismatch(format!("regex: {e}")))?;
        let dfa = ast.to_dfa(alphabet);
        Ok(DomainSpec::Regex {
            alphabet: alphabet.to_vec(),
            dfa,
        })
    }

    /// The word alphabet (string domains) or node alphabet (tree domains).
    pub fn alphabet(&self) -> Vec<Symbol> {
        match self {
            DomainSpec::Regex { alphabet, .. } => alphabet.clone(),
            DomainSpec::Cfg(g) => g.terminals.clone(),
            DomainSpec::Rtg(t) => t.signature.node_labels.clone(),
        }
    }

    pub fn is_tree_domain(&self) -> bool {
        matches!(self, DomainSpec::Rtg(_))
    }

    /// Check the domain speaks the transducers' input language.
    pub fn validate_against(&self, input_sig: &Signature) -> Result<(), DecideError> {
        match self {
            DomainSpec::Rtg(t) => {
                if input_sig.ranks.is_none() {
                    return Err(DecideError::DomainMismatch(
                        "tree domain for string transducers".into(),
                    ));
                }
                for s in &t.signature.node_labels {
                    if !input_sig.has_node_label(s) {
                        return Err(DecideError::DomainMismatch(format!(
                            "domain symbol {s} not in the input signature"
                        )));
                    }
                }
                Ok(())
            }
            _ => {
                if input_sig.ranks.is_some() {
                    return Err(DecideError::DomainMismatch(
                        "string domain for tree transducers".into(),
                    ));
                }
                for s in self.alphabet() {
                    if !input_sig.has_edge_label(&s) {
                        return Err(DecideError::DomainMismatch(format!(
                            "domain letter {s} not in the input signature"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn accepts_word(&self, w: &[Symbol]) -> bool {
        match self {
            DomainSpec::Regex { dfa, .. } => dfa.accepts(w),
            DomainSpec::Cfg(g) => {
                let max = w.len();
                crate::oracle::cfg_language(g, max).contains(w)
            }
            DomainSpec::Rtg(_) => false,
        }
    }
}

/// A deterministic automaton over base letters, used for regular domains.
#[derive(Debug, Clone)]
pub struct DomainDfa {
    pub letters: Vec<Symbol>,
    pub n_states: usize,
    pub start: u32,
    /// delta[state][letter]
    pub delta: Vec<Vec<u32>>,
    pub accepting: Vec<bool>,
}

impl DomainDfa {
    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut q = self.start;
        for a in w {
            match self.letters.iter().position(|l| l == a) {
                Some(i) => q = self.delta[q as usize][i],
                None => return false,
            }
        }
        self.accepting[q as usize]
    }
}

/// Minimal regular expressions: literals, concatenation, `|`, `*`, `+`,
/// `?`, parentheses, and ε for the empty word. Every non-special
/// character is a one-letter symbol of the alphabet.
#[derive(Debug, Clone)]
enum RegexAst {
    Empty,
    Epsilon,
    Lit(usize),
    Concat(Box<RegexAst>, Box<RegexAst>),
    Alt(Box<RegexAst>, Box<RegexAst>),
    Star(Box<RegexAst>),
}

impl RegexAst {
    fn parse(pattern: &str, alphabet: &[Symbol]) -> Result<RegexAst, String> {
        let chars: Vec<char> = pattern.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let ast = Self::parse_alt(&chars, &mut pos, alphabet)?;
        if pos != chars.len() {
            return Err(format!("trailing input at {pos}"));
        }
        Ok(ast)
    }

    fn parse_alt(chars: &[char], pos: &mut usize, alpha: &[Symbol]) -> Result<RegexAst, String> {
        let mut left = Self::parse_concat(chars, pos, alpha)?;
        while chars.get(*pos) == Some(&'|') {
            *pos += 1;
            let right = Self::parse_concat(chars, pos, alpha)?;
            left = RegexAst::Alt(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn parse_concat(chars: &[char], pos: &mut usize, alpha: &[Symbol]) -> Result<RegexAst, String> {
        let mut parts: Vec<RegexAst> = Vec::new();
        while let Some(&c) = chars.get(*pos) {
            if c == ')' || c == '|' {
                break;
            }
            parts.push(Self::parse_postfix(chars, pos, alpha)?);
        }
        Ok(parts
            .into_iter()
            .reduce(|a, b| RegexAst::Concat(Box::new(a), Box::new(b)))
            .unwrap_or(RegexAst::Epsilon))
    }

    fn parse_postfix(chars: &[char], pos: &mut usize, alpha: &[Symbol]) -> Result<RegexAst, String> {
        let mut atom = Self::parse_atom(chars, pos, alpha)?;
        while let Some(&c) = chars.get(*pos) {
            match c {
                '*' => {
                    atom = RegexAst::Star(Box::new(atom));
                    *pos += 1;
                }
                '+' => {
                    atom = RegexAst::Concat(
                        Box::new(atom.clone()),
                        Box::new(RegexAst::Star(Box::new(atom))),
                    );
                    *pos += 1;
                }
                '?' => {
                    atom = RegexAst::Alt(Box::new(atom), Box::new(RegexAst::Epsilon));
                    *pos += 1;
                }
                _ => break,
            }
        }
        Ok(atom)
    }

    fn parse_atom(chars: &[char], pos: &mut usize, alpha: &[Symbol]) -> Result<RegexAst, String> {
        match chars.get(*pos) {
            Some('(') => {
                *pos += 1;
                let inner = Self::parse_alt(chars, pos, alpha)?;
                if chars.get(*pos) != Some(&')') {
                    return Err("missing `)`".into());
                }
                *pos += 1;
                Ok(inner)
            }
            Some('ε') => {
                *pos += 1;
                Ok(RegexAst::Epsilon)
            }
            Some('∅') => {
                *pos += 1;
                Ok(RegexAst::Empty)
            }
            Some(&c) if c != '*' && c != '+' && c != '?' && c != ')' && c != '|' => {
                *pos += 1;
                match alpha.iter().position(|s| s == &c.to_string()) {
                    Some(i) => Ok(RegexAst::Lit(i)),
                    None => Err(format!("letter `{c}` not in the alphabet")),
                }
            }
            other => Err(format!("unexpected {other:?}")),
        }
    }

    /// Thompson construction followed by subset construction.
    fn to_dfa(&self, alphabet: &[Symbol]) -> DomainDfa {
        // NFA with epsilon edges.
        let mut eps: Vec<Vec<u32>> = vec![Vec::new(); 2];
        let mut steps: Vec<Vec<(usize, u32)>> = vec![Vec::new(); 2];
        let (start, end) = (0u32, 1u32);
        let mut fresh = 2u32;
        self.build(
            start,
            end,
            &mut fresh,
            &mut eps,
            &mut steps,
        );

        let closure = |set: &BTreeSet<u32>, eps: &Vec<Vec<u32>>| -> BTreeSet<u32> {
            let mut out = set.clone();
            let mut stack: Vec<u32> = set.iter().copied().collect();
            while let Some(q) = stack.pop() {
                for &t in &eps[q as usize] {
                    if out.insert(t) {
                        stack.push(t);
                    }
                }
            }
            out
        };
        let start_set = closure(&BTreeSet::from([start]), &eps);
        let mut index: BTreeMap<BTreeSet<u32>, u32> = BTreeMap::new();
        index.insert(start_set.clone(), 0);
        let mut sets = vec![start_set];
        let mut delta: Vec<Vec<u32>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let cur = sets[i].clone();
            let mut row = Vec::with_capacity(alphabet.len());
            for l in 0..alphabet.len() {
                let mut next = BTreeSet::new();
                for &q in &cur {
                    for &(ll, t) in &steps[q as usize] {
                        if ll == l {
                            next.insert(t);
                        }
                    }
                }
                let next = closure(&next, &eps);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        index.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let accepting = sets.iter().map(|s| s.contains(&end)).collect();
        DomainDfa {
            letters: alphabet.to_vec(),
            n_states: sets.len(),
            start: 0,
            delta,
            accepting,
        }
    }

    fn build(
        &self,
        from: u32,
        to: u32,
        fresh: &mut u32,
        eps: &mut Vec<Vec<u32>>,
        steps: &mut Vec<Vec<(usize, u32)>>,
    ) {
        let alloc = |fresh: &mut u32, eps: &mut Vec<Vec<u32>>, steps: &mut Vec<Vec<(usize, u32)>>| {
            let q = *fresh;
            *fresh += 1;
            eps.push(Vec::new());
            steps.push(Vec::new());
            q
        };
        match self {
            RegexAst::Empty => {}
            RegexAst::Epsilon => eps[from as usize].push(to),
            RegexAst::Lit(l) => steps[from as usize].push((*l, to)),
            RegexAst::Concat(a, b) => {
                let mid = alloc(fresh, eps, steps);
                a.build(from, mid, fresh, eps, steps);
                b.build(mid, to, fresh, eps, steps);
            }
            RegexAst::Alt(a, b) => {
                a.build(from, to, fresh, eps, steps);
                b.build(from, to, fresh, eps, steps);
            }
            RegexAst::Star(a) => {
                let hub = alloc(fresh, eps, steps);
                eps[from as usize].push(hub);
                eps[hub as usize].push(to);
                a.build(hub, hub, fresh, eps, steps);
            }
        }
    }
}
