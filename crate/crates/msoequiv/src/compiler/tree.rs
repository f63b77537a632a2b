//! Deterministic bottom-up tree automata over annotated ranked alphabets.
//!
//! Transitions are stored sparsely: a missing entry for (letter, children)
//! means the `default` state, and the default is absorbing in every
//! automaton we build unless an explicit entry says otherwise. Products and
//! subset constructions are entry-driven: tuples whose result is the
//! default are never enumerated, which keeps the cost proportional to the
//! populated part of the transition tables.

use std::collections::HashMap;

use crate::compiler::alphabet::BitAlphabet;
use crate::error::CompileError;
use crate::formulas::{Assignment, Sort};
use crate::structures::Term;

#[derive(Debug, Clone)]
pub struct TreeAutomaton {
    pub alphabet: BitAlphabet,
    pub n_states: usize,
    pub default: u32,
    pub delta: HashMap<(u32, Box<[u32]>), u32>,
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

impl TreeAutomaton {
    /// One-state automaton accepting every tree (or none).
    pub fn constant(alphabet: BitAlphabet, accept: bool) -> TreeAutomaton {
        TreeAutomaton {
            alphabet,
            n_states: 1,
            default: 0,
            delta: HashMap::new(),
            accepting: vec![accept],
        }
    }

    pub fn step(&self, letter: u32, children: &[u32]) -> u32 {
        match self.delta.get(&(letter, Box::from(children))) {
            Some(&t) => t,
            None => self.default,
        }
    }

    pub fn run_term(&self, t: &AnnotatedTerm) -> u32 {
        let children: Vec<u32> = t.children.iter().map(|c| self.run_term(c)).collect();
        self.step(t.letter, &children)
    }

    pub fn accepts_term(&self, t: &AnnotatedTerm) -> bool {
        self.accepting[self.run_term(t) as usize]
    }

    pub fn complement(&self) -> TreeAutomaton {
        let mut out = self.clone();
        for a in &mut out.accepting {
            *a = !*a;
        }
        out
    }

    fn rank0_letters(&self) -> Vec<u32> {
        (0..self.alphabet.len() as u32)
            .filter(|&l| self.alphabet.rank_of_letter(l as usize) == 0)
            .collect()
    }

    /// Reachable product combining acceptance with `op`.
    pub fn product(
        &self,
        other: &TreeAutomaton,
        op: impl Fn(bool, bool) -> bool,
        cap: usize,
    ) -> Result<TreeAutomaton, CompileError> {
        if !self.alphabet.same_base(&other.alphabet) || self.alphabet.vars != other.alphabet.vars {
            return Err(CompileError::AlphabetMismatch);
        }
        let default_pair = (self.default, other.default);
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut states: Vec<(u32, u32)> = vec![default_pair];
        index.insert(default_pair, 0);
        let mut delta: HashMap<(u32, Box<[u32]>), u32> = HashMap::new();

        // Group both entry tables by letter.
        let a_by_letter = group_by_letter(&self.delta);
        let b_by_letter = group_by_letter(&other.delta);

        let mut frontier = 0u32;
        loop {
            let known = states.len();
            // Index pair states by each side's component; ids come out
            // sorted because states only grow.
            let mut by_a: HashMap<u32, Vec<u32>> = HashMap::new();
            let mut by_b: HashMap<u32, Vec<u32>> = HashMap::new();
            for (i, &(pa, pb)) in states.iter().enumerate() {
                by_a.entry(pa).or_default().push(i as u32);
                by_b.entry(pb).or_default().push(i as u32);
            }
            let mut results: HashMap<(u32, Box<[u32]>), (u32, u32)> = HashMap::new();
            if frontier == 0 {
                for l in self.rank0_letters() {
                    let t = (self.step(l, &[]), other.step(l, &[]));
                    results.insert((l, Box::from([])), t);
                }
            }
            // A tuple can leave the default pair only through an explicit
            // entry on at least one side; only tuples touching a state
            // discovered in the last round are new.
            let consider = |l: u32, candidates: Vec<&Vec<u32>>, results: &mut HashMap<(u32, Box<[u32]>), (u32, u32)>| {
                for_each_combination_frontier(&candidates, frontier, &mut |tuple_ids: &[u32]| {
                    let key = (l, Box::from(tuple_ids));
                    if results.contains_key(&key) {
                        return;
                    }
                    let a_children: Vec<u32> =
                        tuple_ids.iter().map(|&i| states[i as usize].0).collect();
                    let b_children: Vec<u32> =
                        tuple_ids.iter().map(|&i| states[i as usize].1).collect();
                    let t = (self.step(l, &a_children), other.step(l, &b_children));
                    results.insert(key, t);
                });
            };
            for (l, entries) in &a_by_letter {
                for (q_children, _) in entries {
                    let candidates: Option<Vec<&Vec<u32>>> =
                        q_children.iter().map(|q| by_a.get(q)).collect();
                    if let Some(c) = candidates {
                        consider(*l, c, &mut results);
                    }
                }
            }
            for (l, entries) in &b_by_letter {
                for (q_children, _) in entries {
                    let candidates: Option<Vec<&Vec<u32>>> =
                        q_children.iter().map(|q| by_b.get(q)).collect();
                    if let Some(c) = candidates {
                        consider(*l, c, &mut results);
                    }
                }
            }
            for (key, t) in results {
                let id = match index.get(&t) {
                    Some(&i) => i,
                    None => {
                        let i = states.len() as u32;
                        index.insert(t, i);
                        states.push(t);
                        i
                    }
                };
                if id != 0 {
                    delta.insert(key, id);
                }
            }
            cap_check(states.len(), cap, "tree product")?;
            if states.len() == known {
                break;
            }
            frontier = known as u32;
        }
        let accepting = states
            .iter()
            .map(|&(p, q)| op(self.accepting[p as usize], other.accepting[q as usize]))
            .collect();
        Ok(TreeAutomaton {
            alphabet: self.alphabet.clone(),
            n_states: states.len(),
            default: 0,
            delta,
            accepting,
        }
        .reduce())
    }

    /// Re-index onto a larger variable set (same base).
    pub fn align_to(&self, target: &BitAlphabet) -> Result<TreeAutomaton, CompileError> {
        if !self.alphabet.same_base(target) {
            return Err(CompileError::AlphabetMismatch);
        }
        if self.alphabet.vars == target.vars {
            return Ok(self.clone());
        }
        let by_letter = group_by_letter(&self.delta);
        let mut delta = HashMap::with_capacity(self.delta.len());
        for l in 0..target.len() {
            let src = target.embed_letter(l, &self.alphabet) as u32;
            if let Some(entries) = by_letter.get(&src) {
                for (ch, t) in entries {
                    delta.insert((l as u32, ch.clone()), *t);
                }
            }
        }
        Ok(TreeAutomaton {
            alphabet: target.clone(),
            n_states: self.n_states,
            default: self.default,
            delta,
            accepting: self.accepting.clone(),
        })
    }

    /// Existential projection of one variable bit, then bottom-up subset
    /// construction.
    pub fn project_var(&self, var: &str, cap: usize) -> Result<TreeAutomaton, CompileError> {
        let bit = match self.alphabet.bit_index(var) {
            Some(b) => b,
            None => return Ok(self.clone()),
        };
        let mut vars = self.alphabet.vars.clone();
        vars.remove(bit);
        let target_alpha = self.alphabet.with_vars(vars);
        let expand = |l: usize| {
            let base = target_alpha.base_of(l);
            let bits = target_alpha.bits_of(l);
            let low = bits & ((1 << bit) - 1);
            let high = bits >> bit << (bit + 1);
            (
                self.alphabet.letter(base, high | low) as u32,
                self.alphabet.letter(base, high | (1 << bit) | low) as u32,
            )
        };
        let by_letter = group_by_letter(&self.delta);
        let no_entries: Vec<(Box<[u32]>, u32)> = Vec::new();

        // Subset states; state 0 is {inner default}, the target of every
        // all-miss tuple.
        let dflt: Box<[u32]> = Box::from([self.default]);
        let mut index: HashMap<Box<[u32]>, u32> = HashMap::new();
        let mut sets: Vec<Box<[u32]>> = vec![dflt.clone()];
        index.insert(dflt, 0);
        let mut delta: HashMap<(u32, Box<[u32]>), u32> = HashMap::new();

        let mut frontier = 0u32;
        loop {
            let known = sets.len();
            // Which subset states contain a given inner state.
            let mut containing: HashMap<u32, Vec<u32>> = HashMap::new();
            for (i, s) in sets.iter().enumerate() {
                for &q in s.iter() {
                    containing.entry(q).or_default().push(i as u32);
                }
            }
            let mut results: HashMap<(u32, Box<[u32]>), Box<[u32]>> = HashMap::new();
            for l in 0..target_alpha.len() {
                let k = target_alpha.rank_of_letter(l);
                let (l0, l1) = expand(l);
                let e0 = by_letter.get(&l0).unwrap_or(&no_entries);
                let e1 = by_letter.get(&l1).unwrap_or(&no_entries);
                if k == 0 {
                    if frontier == 0 {
                        let mut targets: Vec<u32> = vec![self.step(l0, &[]), self.step(l1, &[])];
                        targets.sort_unstable();
                        targets.dedup();
                        results.insert((l as u32, Box::from([])), targets.into_boxed_slice());
                    }
                    continue;
                }
                // Candidate subset-tuples: those matched by some entry and
                // touching a subset discovered in the last round.
                for (q_children, _) in e0.iter().chain(e1.iter()) {
                    let candidates: Option<Vec<&Vec<u32>>> =
                        q_children.iter().map(|q| containing.get(q)).collect();
                    let candidates = match candidates {
                        Some(c) => c,
                        None => continue,
                    };
                    for_each_combination_frontier(&candidates, frontier, &mut |tuple_ids: &[u32]| {
                        let key = (l as u32, Box::from(tuple_ids));
                        if results.contains_key(&key) {
                            return;
                        }
                        let total: usize = tuple_ids
                            .iter()
                            .map(|&i| sets[i as usize].len())
                            .product();
                        let mut targets: Vec<u32> = Vec::new();
                        let mut matched = 0usize;
                        for entries in [e0, e1] {
                            for (q_children, t) in entries {
                                let inside = q_children.iter().zip(tuple_ids.iter()).all(
                                    |(q, &si)| sets[si as usize].binary_search(q).is_ok(),
                                );
                                if inside {
                                    targets.push(*t);
                                    matched += 1;
                                }
                            }
                        }
                        // Any member tuple that misses both tables lands in
                        // the inner default.
                        if matched < 2 * total {
                            targets.push(self.default);
                        }
                        targets.sort_unstable();
                        targets.dedup();
                        results.insert(key, targets.into_boxed_slice());
                    });
                }
            }
            for (key, set) in results {
                let id = match index.get(&set) {
                    Some(&i) => i,
                    None => {
                        let i = sets.len() as u32;
                        index.insert(set.clone(), i);
                        sets.push(set);
                        i
                    }
                };
                if id != 0 {
                    delta.insert(key, id);
                }
            }
            cap_check(sets.len(), cap, "tree determinize")?;
            if sets.len() == known {
                break;
            }
            frontier = known as u32;
        }
        let accepting = sets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q as usize]))
            .collect();
        Ok(TreeAutomaton {
            alphabet: target_alpha,
            n_states: sets.len(),
            default: 0,
            delta,
            accepting,
        }
        .reduce())
    }

    /// Trim to constructible states and take the quotient by the coarsest
    /// congruence respecting acceptance: the tree analogue of Moore
    /// minimization. Refinement only ever inspects explicit entries; in
    /// any context absent from the table every state behaves as the
    /// default, so such contexts can never split a class.
    pub fn reduce(&self) -> TreeAutomaton {
        self.trim().minimize_congruence()
    }

    fn minimize_congruence(&self) -> TreeAutomaton {
        // Contexts: one per (letter, position, raw siblings) appearing in
        // an entry, each with the states it lists and their raw targets.
        let mut ctx_index: HashMap<(u32, usize, Box<[u32]>), usize> = HashMap::new();
        let mut ctx_members: Vec<Vec<(u32, u32)>> = Vec::new();
        for ((l, ch), t) in &self.delta {
            for (i, &c) in ch.iter().enumerate() {
                let mut holed = ch.clone();
                holed[i] = u32::MAX;
                let key = (*l, i, holed);
                let id = *ctx_index.entry(key).or_insert_with(|| {
                    ctx_members.push(Vec::new());
                    ctx_members.len() - 1
                });
                ctx_members[id].push((c, *t));
            }
        }
        let mut class: Vec<u32> = self
            .accepting
            .iter()
            .map(|&a| if a { 1 } else { 0 })
            .collect();
        let mut n_classes = 2usize.min(self.n_states);
        loop {
            let default_class = class[self.default as usize];
            // Signature per state: non-default behaviors over all contexts
            // listing it.
            let mut sig: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.n_states];
            for (ctx_id, members) in ctx_members.iter().enumerate() {
                for &(q, t) in members {
                    let beh = class[t as usize];
                    if beh != default_class {
                        sig[q as usize].push((ctx_id as u32, beh));
                    }
                }
            }
            let mut next_index: HashMap<(u32, Vec<(u32, u32)>), u32> = HashMap::new();
            let mut next_class = vec![0u32; self.n_states];
            for q in 0..self.n_states {
                sig[q].sort_unstable();
                sig[q].dedup();
                let key = (class[q], std::mem::take(&mut sig[q]));
                let fresh = next_index.len() as u32;
                let id = *next_index.entry(key).or_insert(fresh);
                next_class[q] = id;
            }
            let m = next_index.len();
            class = next_class;
            if m == n_classes {
                break;
            }
            n_classes = m;
        }
        if n_classes == self.n_states {
            return self.clone();
        }
        let default = class[self.default as usize];
        let mut delta = HashMap::with_capacity(self.delta.len());
        for ((l, ch), t) in &self.delta {
            let ch2: Box<[u32]> = ch.iter().map(|&c| class[c as usize]).collect();
            let tc = class[*t as usize];
            if tc != default {
                delta.insert((*l, ch2), tc);
            }
        }
        let mut accepting = vec![false; n_classes];
        for q in 0..self.n_states {
            accepting[class[q] as usize] = self.accepting[q];
        }
        TreeAutomaton {
            alphabet: self.alphabet.clone(),
            n_states: n_classes,
            default,
            delta,
            accepting,
        }
        .trim()
    }

    fn trim(&self) -> TreeAutomaton {
        let mut constructible = vec![false; self.n_states];
        let mut any = false;
        for l in self.rank0_letters() {
            let t = self.step(l, &[]) as usize;
            if !constructible[t] {
                constructible[t] = true;
                any = true;
            }
        }
        if any && self.alphabet.ranks.as_ref().is_some_and(|rs| rs.iter().any(|&r| r > 0)) {
            // Any tuple without an entry reaches the default.
            constructible[self.default as usize] = true;
        }
        loop {
            let mut changed = false;
            for ((_, ch), t) in &self.delta {
                if !constructible[*t as usize]
                    && ch.iter().all(|&c| constructible[c as usize])
                {
                    constructible[*t as usize] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        constructible[self.default as usize] = true;
        if constructible.iter().all(|&c| c) {
            return self.clone();
        }
        let mut map = vec![u32::MAX; self.n_states];
        let mut next = 0u32;
        for q in 0..self.n_states {
            if constructible[q] {
                map[q] = next;
                next += 1;
            }
        }
        let delta = self
            .delta
            .iter()
            .filter(|((_, ch), t)| {
                ch.iter().all(|&c| constructible[c as usize]) && constructible[**t as usize]
            })
            .map(|((l, ch), t)| {
                (
                    (
                        *l,
                        ch.iter().map(|&c| map[c as usize]).collect::<Box<[u32]>>(),
                    ),
                    map[*t as usize],
                )
            })
            .collect();
        let accepting = (0..self.n_states)
            .filter(|&q| constructible[q])
            .map(|q| self.accepting[q])
            .collect();
        TreeAutomaton {
            alphabet: self.alphabet.clone(),
            n_states: next as usize,
            default: map[self.default as usize],
            delta,
            accepting,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.smallest_accepted().is_none()
    }

    /// An accepted annotated term of small (not always minimal) size.
    pub fn smallest_accepted(&self) -> Option<AnnotatedTerm> {
        let mut size: Vec<Option<(usize, u32, Box<[u32]>)>> = vec![None; self.n_states];
        let by_letter = group_by_letter(&self.delta);
        loop {
            let mut changed = false;
            for l in self.rank0_letters() {
                let t = self.step(l, &[]);
                changed |= consider(&mut size, t, 1, l, Box::from([]));
            }
            for (l, entries) in &by_letter {
                let k = self.alphabet.rank_of_letter(*l as usize);
                if k == 0 {
                    continue;
                }
                for (ch, t) in entries {
                    if let Some(total) = ch
                        .iter()
                        .map(|&c| size[c as usize].as_ref().map(|(s, _, _)| *s))
                        .sum::<Option<usize>>()
                    {
                        changed |= consider(&mut size, *t, total + 1, *l, ch.clone());
                    }
                }
            }
            // The default state is witnessed by any witnessed tuple missing
            // from the table; by pigeonhole, checking one more tuple than
            // there are entries suffices.
            if size[self.default as usize].is_none() {
                'letters: for l in 0..self.alphabet.len() as u32 {
                    let k = self.alphabet.rank_of_letter(l as usize);
                    if k == 0 {
                        continue;
                    }
                    let mut witnessed: Vec<u32> = (0..self.n_states as u32)
                        .filter(|&q| size[q as usize].is_some())
                        .collect();
                    witnessed.sort_by_key(|&q| size[q as usize].as_ref().unwrap().0);
                    if witnessed.is_empty() {
                        continue;
                    }
                    let budget = by_letter.get(&l).map(|e| e.len()).unwrap_or(0) + 1;
                    let mut tried = 0usize;
                    let mut tuple = vec![0u32; k];
                    let mut found: Option<Box<[u32]>> = None;
                    enumerate_tuples(witnessed.len(), k, 0, &mut tuple, &mut |t: &[u32]| {
                        if found.is_some() || tried > budget {
                            return;
                        }
                        tried += 1;
                        let ch: Box<[u32]> = t.iter().map(|&i| witnessed[i as usize]).collect();
                        if !self.delta.contains_key(&(l, ch.clone())) {
                            found = Some(ch);
                        }
                    });
                    if let Some(ch) = found {
                        let total: usize = ch
                            .iter()
                            .map(|&c| size[c as usize].as_ref().unwrap().0)
                            .sum();
                        consider(&mut size, self.default, total + 1, l, ch);
                        changed = true;
                        break 'letters;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let best = (0..self.n_states)
            .filter(|&q| self.accepting[q] && size[q].is_some())
            .min_by_key(|&q| size[q].as_ref().unwrap().0)?;
        Some(self.rebuild_witness(best as u32, &size))
    }

    fn rebuild_witness(&self, q: u32, size: &[Option<(usize, u32, Box<[u32]>)>]) -> AnnotatedTerm {
        let (_, l, ch) = size[q as usize].as_ref().expect("witnessed state");
        AnnotatedTerm {
            letter: *l,
            children: ch.iter().map(|&c| self.rebuild_witness(c, size)).collect(),
        }
    }
}

fn group_by_letter(
    delta: &HashMap<(u32, Box<[u32]>), u32>,
) -> HashMap<u32, Vec<(Box<[u32]>, u32)>> {
    let mut out: HashMap<u32, Vec<(Box<[u32]>, u32)>> = HashMap::new();
    for ((l, ch), t) in delta {
        out.entry(*l).or_default().push((ch.clone(), *t));
    }
    out
}

fn consider(
    size: &mut [Option<(usize, u32, Box<[u32]>)>],
    q: u32,
    s: usize,
    l: u32,
    ch: Box<[u32]>,
) -> bool {
    let better = match &size[q as usize] {
        None => true,
        Some((old, _, _)) => s < *old,
    };
    if better {
        size[q as usize] = Some((s, l, ch));
    }
    better
}

/// A term whose nodes carry annotated-alphabet letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedTerm {
    pub letter: u32,
    pub children: Vec<AnnotatedTerm>,
}

impl AnnotatedTerm {
    /// Decode back to a plain term over the base alphabet.
    pub fn to_term(&self, alphabet: &BitAlphabet) -> Term {
        Term {
            symbol: alphabet.base[alphabet.base_of(self.letter as usize)].clone(),
            children: self.children.iter().map(|c| c.to_term(alphabet)).collect(),
        }
    }
}

/// Encode a term and a valuation as an annotated term for `alphabet`.
/// Nodes are numbered in pre-order, matching `tree_to_graph`.
pub fn encode_term(
    alphabet: &BitAlphabet,
    t: &Term,
    assignment: &Assignment,
) -> Result<AnnotatedTerm, CompileError> {
    fn walk(
        alphabet: &BitAlphabet,
        t: &Term,
        assignment: &Assignment,
        counter: &mut usize,
    ) -> Result<AnnotatedTerm, CompileError> {
        let me = *counter;
        *counter += 1;
        let base = alphabet.base_index(&t.symbol).ok_or_else(|| {
            CompileError::WrongSignature(format!("symbol {} not in alphabet", t.symbol))
        })?;
        let mut bits = 0usize;
        for (i, (name, sort)) in alphabet.vars.iter().enumerate() {
            let set = match sort {
                Sort::Node => match assignment.nodes.get(name) {
                    Some(&v) => v == me,
                    None => {
                        return Err(CompileError::Formula(
                            crate::error::FormulaError::Unbound(name.clone()),
                        ))
                    }
                },
                Sort::NodeSet => match assignment.sets.get(name) {
                    Some(s) => s.contains(&me),
                    None => {
                        return Err(CompileError::Formula(
                            crate::error::FormulaError::Unbound(name.clone()),
                        ))
                    }
                },
            };
            if set {
                bits |= 1 << i;
            }
        }
        let children = t
            .children
            .iter()
            .map(|c| walk(alphabet, c, assignment, counter))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AnnotatedTerm {
            letter: alphabet.letter(base, bits) as u32,
            children,
        })
    }
    let mut counter = 0;
    walk(alphabet, t, assignment, &mut counter)
}

/// Call `f` on every `k`-tuple over `0..known` containing at least one
/// component `>= frontier_start`.
pub(crate) fn enumerate_tuples(
    known: usize,
    k: usize,
    frontier_start: usize,
    tuple: &mut [u32],
    f: &mut impl FnMut(&[u32]),
) {
    fn rec(
        known: usize,
        k: usize,
        frontier_start: usize,
        pos: usize,
        has_new: bool,
        tuple: &mut [u32],
        f: &mut impl FnMut(&[u32]),
    ) {
        if pos == k {
            if has_new || frontier_start == 0 {
                f(tuple);
            }
            return;
        }
        for v in 0..known {
            tuple[pos] = v as u32;
            rec(
                known,
                k,
                frontier_start,
                pos + 1,
                has_new || v >= frontier_start,
                tuple,
                f,
            );
        }
    }
    if k == 0 {
        if frontier_start == 0 {
            f(tuple);
        }
        return;
    }
    rec(known, k, frontier_start, 0, false, tuple, f);
}

/// Call `f` on every choice of one element per candidate list where at
/// least one chosen value is `>= frontier` (all choices when frontier 0).
fn for_each_combination_frontier(
    candidates: &[&Vec<u32>],
    frontier: u32,
    f: &mut impl FnMut(&[u32]),
) {
    fn rec(
        candidates: &[&Vec<u32>],
        frontier: u32,
        pos: usize,
        has_new: bool,
        tuple: &mut [u32],
        f: &mut impl FnMut(&[u32]),
    ) {
        if pos == candidates.len() {
            if has_new || frontier == 0 {
                f(tuple);
            }
            return;
        }
        for &v in candidates[pos] {
            tuple[pos] = v;
            rec(candidates, frontier, pos + 1, has_new || v >= frontier, tuple, f);
        }
    }
    if candidates.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut tuple = vec![0u32; candidates.len()];
    rec(candidates, frontier, 0, false, &mut tuple, f);
}
