//! Deterministic word automata over annotated alphabets.
//!
//! Automata are always complete: every state has a transition on every
//! letter. Boolean combinations are reachable products, existential bit
//! projection is subset construction, and minimization is Moore partition
//! refinement. Everything checks the state cap and fails with a reported
//! error instead of truncating.

use std::collections::{HashMap, VecDeque};

use crate::compiler::alphabet::BitAlphabet;
use crate::error::CompileError;

#[derive(Debug, Clone)]
pub struct WordAutomaton {
    pub alphabet: BitAlphabet,
    pub n_states: usize,
    pub start: u32,
    /// Dense transition table, state-major: `delta[state * |alphabet| + letter]`.
    pub delta: Vec<u32>,
    pub accepting: Vec<bool>,
}

fn cap_check(states: usize, cap: usize, stage: &str) -> Result<(), CompileError> {
    if states > cap {
        Err(CompileError::StateCap {
            stage: stage.to_string(),
            states,
            cap,
        })
    } else {
        Ok(())
    }
}

impl WordAutomaton {
    /// Single-state automaton accepting everything (or nothing).
    pub fn constant(alphabet: BitAlphabet, accept: bool) -> WordAutomaton {
        WordAutomaton {
            n_states: 1,
            start: 0,
            delta: vec![0; alphabet.len()],
            accepting: vec![accept],
            alphabet,
        }
    }

    /// Build from an explicit transition function.
    pub fn from_fn(
        alphabet: BitAlphabet,
        n_states: usize,
        start: u32,
        accepting: Vec<bool>,
        f: impl Fn(u32, usize) -> u32,
    ) -> WordAutomaton {
        let len = alphabet.len();
        let mut delta = vec![0u32; n_states * len];
        for q in 0..n_states {
            for l in 0..len {
                delta[q * len + l] = f(q as u32, l);
            }
        }
        WordAutomaton {
            alphabet,
            n_states,
            start,
            delta,
            accepting,
        }
    }

    pub fn step(&self, q: u32, letter: usize) -> u32 {
        self.delta[q as usize * self.alphabet.len() + letter]
    }

    pub fn accepts_letters(&self, letters: &[usize]) -> bool {
        let mut q = self.start;
        for &l in letters {
            q = self.step(q, l);
        }
        self.accepting[q as usize]
    }

    pub fn complement(&self) -> WordAutomaton {
        let mut out = self.clone();
        for a in &mut out.accepting {
            *a = !*a;
        }
        out
    }

    /// Reachable product combining acceptance with `op`.
    pub fn product(
        &self,
        other: &WordAutomaton,
        op: impl Fn(bool, bool) -> bool,
        cap: usize,
    ) -> Result<WordAutomaton, CompileError> {
        if !self.alphabet.same_base(&other.alphabet) || self.alphabet.vars != other.alphabet.vars {
            return Err(CompileError::AlphabetMismatch);
        }
        let len = self.alphabet.len();
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = vec![(self.start, other.start)];
        index.insert((self.start, other.start), 0);
        let mut delta: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for l in 0..len {
                let t = (self.step(p, l), other.step(q, l));
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    (pairs.len() - 1) as u32
                });
                delta.push(id);
            }
            cap_check(pairs.len(), cap, "product")?;
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| op(self.accepting[p as usize], other.accepting[q as usize]))
            .collect();
        Ok(WordAutomaton {
            alphabet: self.alphabet.clone(),
            n_states: pairs.len(),
            start: 0,
            delta,
            accepting,
        })
    }

    /// Re-index onto a larger variable set (same base); new bits are
    /// ignored by the transitions.
    pub fn align_to(&self, target: &BitAlphabet) -> Result<WordAutomaton, CompileError> {
        if !self.alphabet.same_base(target) {
            return Err(CompileError::AlphabetMismatch);
        }
        if self.alphabet.vars == target.vars {
            return Ok(self.clone());
        }
        let len = target.len();
        let mut delta = vec![0u32; self.n_states * len];
        for l in 0..len {
            let src = target.embed_letter(l, &self.alphabet);
            for q in 0..self.n_states {
                delta[q * len + l] = self.step(q as u32, src);
            }
        }
        Ok(WordAutomaton {
            alphabet: target.clone(),
            n_states: self.n_states,
            start: self.start,
            delta,
            accepting: self.accepting.clone(),
        })
    }

    /// Existential projection of one variable bit followed by subset
    /// construction. The result is deterministic over the alphabet without
    /// that variable.
    pub fn project_var(&self, var: &str, cap: usize) -> Result<WordAutomaton, CompileError> {
        let bit = match self.alphabet.bit_index(var) {
            Some(b) => b,
            None => return Ok(self.clone()),
        };
        let mut vars = self.alphabet.vars.clone();
        vars.remove(bit);
        let target = self.alphabet.with_vars(vars);
        let len = target.len();

        // letter in target -> the two letters of self with bit 0/1 inserted
        let expand = |l: usize| {
            let base = target.base_of(l);
            let bits = target.bits_of(l);
            let low = bits & ((1 << bit) - 1);
            let high = bits >> bit << (bit + 1);
            let zero = self.alphabet.letter(base, high | low);
            let one = self.alphabet.letter(base, high | (1 << bit) | low);
            (zero, one)
        };

        let mut index: HashMap<Box<[u32]>, u32> = HashMap::new();
        let start_set: Box<[u32]> = Box::from([self.start]);
        index.insert(start_set.clone(), 0);
        let mut sets: Vec<Box<[u32]>> = vec![start_set];
        let mut delta: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let cur = sets[i].clone();
            for l in 0..len {
                let (l0, l1) = expand(l);
                let mut next: Vec<u32> = Vec::with_capacity(cur.len() * 2);
                for &q in cur.iter() {
                    next.push(self.step(q, l0));
                    next.push(self.step(q, l1));
                }
                next.sort_unstable();
                next.dedup();
                let key: Box<[u32]> = next.into_boxed_slice();
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        index.insert(key.clone(), id);
                        sets.push(key);
                        id
                    }
                };
                delta.push(id);
            }
            cap_check(sets.len(), cap, "determinize")?;
            i += 1;
        }
        let accepting = sets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q as usize]))
            .collect();
        Ok(WordAutomaton {
            alphabet: target,
            n_states: sets.len(),
            start: 0,
            delta,
            accepting,
        })
    }

    /// Moore partition refinement; the result is the minimal complete DFA
    /// for the same language (up to unreachable-state removal).
    pub fn minimize(&self) -> WordAutomaton {
        let trimmed = self.trim_reachable();
        let len = trimmed.alphabet.len();
        let n = trimmed.n_states;
        // class per state, seeded by acceptance
        let mut class: Vec<u32> = trimmed
            .accepting
            .iter()
            .map(|&a| if a { 1 } else { 0 })
            .collect();
        let mut n_classes = 2;
        loop {
            let mut sig_index: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
            let mut next_class = vec![0u32; n];
            for q in 0..n {
                let sig: Vec<u32> = (0..len)
                    .map(|l| class[trimmed.delta[q * len + l] as usize])
                    .collect();
                let key = (class[q], sig);
                let next_id = sig_index.len() as u32;
                let id = *sig_index.entry(key).or_insert(next_id);
                next_class[q] = id;
            }
            let m = sig_index.len();
            if m == n_classes {
                class = next_class;
                break;
            }
            n_classes = m;
            class = next_class;
        }
        let mut delta = vec![0u32; n_classes * len];
        let mut accepting = vec![false; n_classes];
        for q in 0..n {
            let c = class[q] as usize;
            accepting[c] = trimmed.accepting[q];
            for l in 0..len {
                delta[c * len + l] = class[trimmed.delta[q * len + l] as usize];
            }
        }
        WordAutomaton {
            alphabet: trimmed.alphabet,
            n_states: n_classes,
            start: class[trimmed.start as usize],
            delta,
            accepting,
        }
    }

    fn trim_reachable(&self) -> WordAutomaton {
        let len = self.alphabet.len();
        let mut map = vec![u32::MAX; self.n_states];
        let mut order: Vec<u32> = vec![self.start];
        map[self.start as usize] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for l in 0..len {
                let t = self.step(q, l);
                if map[t as usize] == u32::MAX {
                    map[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
            i += 1;
        }
        if order.len() == self.n_states {
            return self.clone();
        }
        let mut delta = vec![0u32; order.len() * len];
        let mut accepting = vec![false; order.len()];
        for (new_q, &old_q) in order.iter().enumerate() {
            accepting[new_q] = self.accepting[old_q as usize];
            for l in 0..len {
                delta[new_q * len + l] = map[self.step(old_q, l) as usize];
            }
        }
        WordAutomaton {
            alphabet: self.alphabet.clone(),
            n_states: order.len(),
            start: 0,
            delta,
            accepting,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// Shortest accepted letter sequence, by breadth-first search.
    pub fn shortest_accepted(&self) -> Option<Vec<usize>> {
        let len = self.alphabet.len();
        let mut pred: Vec<Option<(u32, usize)>> = vec![None; self.n_states];
        let mut seen = vec![false; self.n_states];
        seen[self.start as usize] = true;
        let mut queue = VecDeque::from([self.start]);
        let mut hit = None;
        if self.accepting[self.start as usize] {
            hit = Some(self.start);
        }
        while hit.is_none() {
            let q = match queue.pop_front() {
                Some(q) => q,
                None => return None,
            };
            for l in 0..len {
                let t = self.step(q, l);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    pred[t as usize] = Some((q, l));
                    if self.accepting[t as usize] {
                        hit = Some(t);
                        break;
                    }
                    queue.push_back(t);
                }
            }
        }
        let mut letters = Vec::new();
        let mut cur = hit.unwrap();
        while let Some((p, l)) = pred[cur as usize] {
            letters.push(l);
            cur = p;
        }
        letters.reverse();
        Some(letters)
    }
}
