//! Compiling MSO formulas on string graphs into word automata.
//!
//! The compilation is the standard one: atoms become small automata over
//! the annotated alphabet, boolean connectives become products and
//! complements, an existential quantifier becomes bit projection followed
//! by subset construction, and a universal one is `not exists not`. The
//! automaton is minimized after every operation.
//!
//! Words are read as node-words: the string graph of a1..an has n+1 nodes,
//! so the automaton reads a1..an followed by the padding symbol, one letter
//! per node. Every first-order variable carries a uniqueness constraint
//! conjoined at quantification time and once more on the final result.

use std::collections::BTreeMap;

use crate::compiler::alphabet::{BitAlphabet, PAD};
use crate::compiler::tree::TreeAutomaton;
use crate::compiler::word::WordAutomaton;
use crate::error::CompileError;
use crate::formulas::{expand_keep_eq, Assignment, Context, Formula, Sort};
use crate::signature::{Signature, Symbol, HASH};
use crate::structures::Term;

/// Default cap on automaton states.
pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Compile a formula over string graphs into a deterministic word
/// automaton over the annotated alphabet for `ctx`.
pub fn compile_word(
    f: &Formula,
    ctx: &Context,
    sig: &Signature,
    cap: usize,
) -> Result<WordAutomaton, CompileError> {
    if sig.node_labels != vec![HASH.to_string()] {
        return Err(CompileError::WrongSignature(format!(
            "string signatures have node labels {{#}}, got {:?}",
            sig.node_labels
        )));
    }
    let expanded = expand_keep_eq(f, sig)?;
    let free = expanded.free_vars();
    for (v, sort) in &free {
        match ctx.iter().find(|(n, _)| n == v) {
            None => {
                return Err(CompileError::Formula(crate::error::FormulaError::Unbound(
                    v.clone(),
                )))
            }
            Some((_, s)) if s != sort => {
                return Err(CompileError::Formula(
                    crate::error::FormulaError::SortMismatch(
                        v.clone(),
                        sort.to_string(),
                        s.to_string(),
                    ),
                ))
            }
            _ => {}
        }
    }
    let c = WordCompiler {
        delta: sig.edge_labels.clone(),
        cap,
    };
    let a = c.compile(&expanded)?;
    // Align to the requested context, then enforce well-formedness: each
    // first-order bit occurs exactly once, and the padding symbol closes
    // the word.
    let full = c.alphabet(ctx.clone());
    let mut a = a.align_to(&full)?;
    for (v, sort) in ctx {
        if *sort == Sort::Node {
            a = a.product(&c.uniqueness(&full, v), |x, y| x && y, cap)?;
        }
    }
    a = a.product(&c.pad_shape(&full), |x, y| x && y, cap)?;
    Ok(a.minimize())
}

struct WordCompiler {
    delta: Vec<Symbol>,
    cap: usize,
}

impl WordCompiler {
    fn alphabet(&self, vars: Context) -> BitAlphabet {
        BitAlphabet::for_words(&self.delta, vars)
    }

    fn compile(&self, f: &Formula) -> Result<WordAutomaton, CompileError> {
        match f {
            Formula::True => Ok(WordAutomaton::constant(self.alphabet(vec![]), true)),
            Formula::False => Ok(WordAutomaton::constant(self.alphabet(vec![]), false)),
            Formula::Lab(sigma, x) => {
                if sigma != HASH {
                    return Err(CompileError::WrongSignature(format!("lab_{sigma}")));
                }
                Ok(WordAutomaton::constant(
                    self.alphabet(vec![(x.clone(), Sort::Node)]),
                    true,
                ))
            }
            Formula::Edge(gamma, x, y) => self.edge_atom(gamma, x, y),
            Formula::In(x, set) => Ok(self.in_atom(x, set)),
            Formula::Eq(x, y) => Ok(self.eq_atom(x, y)),
            Formula::Not(g) => Ok(self.compile(g)?.complement()),
            Formula::And(a, b) => self.binop(a, b, |x, y| x && y),
            Formula::Or(a, b) => self.binop(a, b, |x, y| x || y),
            Formula::Implies(a, b) => self.binop(a, b, |x, y| !x || y),
            Formula::Iff(a, b) => self.binop(a, b, |x, y| x == y),
            Formula::Exists(sort, x, g) => {
                let inner = self.compile(g)?;
                self.quantify(inner, *sort, x)
            }
            Formula::Forall(sort, x, g) => {
                let inner = self.compile(g)?.complement();
                Ok(self.quantify(inner, *sort, x)?.complement().minimize())
            }
            Formula::Apply(..) => unreachable!("macros were expanded"),
        }
    }

    fn binop(
        &self,
        a: &Formula,
        b: &Formula,
        op: impl Fn(bool, bool) -> bool,
    ) -> Result<WordAutomaton, CompileError> {
        let left = self.compile(a)?;
        let right = self.compile(b)?;
        let joined = left.alphabet.join_vars(&right.alphabet);
        let left = left.align_to(&joined)?;
        let right = right.align_to(&joined)?;
        Ok(left.product(&right, op, self.cap)?.minimize())
    }

    fn quantify(
        &self,
        inner: WordAutomaton,
        sort: Sort,
        var: &str,
    ) -> Result<WordAutomaton, CompileError> {
        let mut a = inner;
        if a.alphabet.bit_index(var).is_none() {
            let mut vars = a.alphabet.vars.clone();
            vars.push((var.to_string(), sort));
            a = a.align_to(&a.alphabet.with_vars(vars))?;
        }
        if sort == Sort::Node {
            let u = self.uniqueness(&a.alphabet, var);
            a = a.product(&u, |x, y| x && y, self.cap)?;
        }
        Ok(a.project_var(var, self.cap)?.minimize())
    }

    /// Exactly one occurrence of the variable's bit.
    fn uniqueness(&self, alphabet: &BitAlphabet, var: &str) -> WordAutomaton {
        let bit = alphabet
            .bit_index(var)
            .expect("uniqueness over a present bit");
        let alpha = alphabet.clone();
        WordAutomaton::from_fn(alpha.clone(), 3, 0, vec![false, true, false], |q, l| {
            let marked = alpha.has_bit(l, bit);
            match (q, marked) {
                (0, false) => 0,
                (0, true) => 1,
                (1, false) => 1,
                _ => 2,
            }
        })
    }

    /// Node-words are a1..an PAD with the letters drawn from the edge
    /// alphabet: the padding symbol occurs exactly once, at the end.
    fn pad_shape(&self, alphabet: &BitAlphabet) -> WordAutomaton {
        let pad = alphabet.base_index(PAD).expect("word alphabets end in PAD");
        let alpha = alphabet.clone();
        WordAutomaton::from_fn(alpha.clone(), 3, 0, vec![false, true, false], |q, l| {
            let is_pad = alpha.base_of(l) == pad;
            match (q, is_pad) {
                (0, false) => 0,
                (0, true) => 1,
                _ => 2,
            }
        })
    }

    /// edg_gamma(x,y): y sits right after x and the letter at x is gamma.
    fn edge_atom(&self, gamma: &str, x: &str, y: &str) -> Result<WordAutomaton, CompileError> {
        let alpha = self.alphabet(vec![(x.to_string(), Sort::Node), (y.to_string(), Sort::Node)]);
        let gamma_idx = match alpha.base_index(gamma) {
            Some(i) if gamma != PAD => i,
            _ => return Err(CompileError::WrongSignature(format!("edg_{gamma}"))),
        };
        let bx = alpha.bit_index(x).unwrap();
        let by = alpha.bit_index(y).unwrap();
        let alpha2 = alpha.clone();
        // 0: before x; 1: x read with the right letter, y must come now;
        // 2: accept; 3: dead.
        Ok(WordAutomaton::from_fn(
            alpha.clone(),
            4,
            0,
            vec![false, false, true, false],
            move |q, l| {
                let has_x = alpha2.has_bit(l, bx);
                let has_y = alpha2.has_bit(l, by);
                let letter_ok = alpha2.base_of(l) == gamma_idx;
                match q {
                    0 => match (has_x, has_y) {
                        (false, false) => 0,
                        (true, false) if letter_ok => 1,
                        // x and y marks on one node also fail when x = y.
                        _ => 3,
                    },
                    1 => {
                        if has_y && !has_x {
                            2
                        } else {
                            3
                        }
                    }
                    2 => 2,
                    _ => 3,
                }
            },
        ))
    }

    /// x in X: the X-bit is set where the x-bit is.
    fn in_atom(&self, x: &str, set: &str) -> WordAutomaton {
        let alpha = self.alphabet(vec![
            (x.to_string(), Sort::Node),
            (set.to_string(), Sort::NodeSet),
        ]);
        let bx = alpha.bit_index(x).unwrap();
        let bs = alpha.bit_index(set).unwrap();
        let alpha2 = alpha.clone();
        WordAutomaton::from_fn(
            alpha.clone(),
            3,
            0,
            vec![false, true, false],
            move |q, l| match q {
                0 if alpha2.has_bit(l, bx) => {
                    if alpha2.has_bit(l, bs) {
                        1
                    } else {
                        2
                    }
                }
                0 => 0,
                1 => 1,
                _ => 2,
            },
        )
    }

    /// x = y: the two marks fall on the same node.
    fn eq_atom(&self, x: &str, y: &str) -> WordAutomaton {
        let alpha = self.alphabet(vec![(x.to_string(), Sort::Node), (y.to_string(), Sort::Node)]);
        let bx = alpha.bit_index(x).unwrap();
        let by = alpha.bit_index(y).unwrap();
        let alpha2 = alpha.clone();
        WordAutomaton::from_fn(
            alpha.clone(),
            3,
            0,
            vec![false, true, false],
            move |q, l| {
                let has_x = alpha2.has_bit(l, bx);
                let has_y = alpha2.has_bit(l, by);
                match q {
                    0 => match (has_x, has_y) {
                        (true, true) => 1,
                        (false, false) => 0,
                        _ => 2,
                    },
                    1 => 1,
                    _ => 2,
                }
            },
        )
    }
}

/// Encode a word and a valuation as annotated letters for `automaton`.
pub fn encode_word(
    automaton: &WordAutomaton,
    word: &[Symbol],
    assignment: &Assignment,
) -> Result<Vec<usize>, CompileError> {
    let alpha = &automaton.alphabet;
    let pad = alpha.base_index(PAD).expect("word alphabet");
    let mut letters = Vec::with_capacity(word.len() + 1);
    for pos in 0..=word.len() {
        let base = if pos < word.len() {
            alpha.base_index(&word[pos]).ok_or_else(|| {
                CompileError::WrongSignature(format!("letter {} not in alphabet", word[pos]))
            })?
        } else {
            pad
        };
        let mut bits = 0usize;
        for (i, (name, sort)) in alpha.vars.iter().enumerate() {
            let set = match sort {
                Sort::Node => match assignment.nodes.get(name) {
                    Some(&v) => v == pos,
                    None => {
                        return Err(CompileError::Formula(
                            crate::error::FormulaError::Unbound(name.clone()),
                        ))
                    }
                },
                Sort::NodeSet => match assignment.sets.get(name) {
                    Some(s) => s.contains(&pos),
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
        letters.push(alpha.letter(base, bits));
    }
    Ok(letters)
}

/// Run the automaton on a word under a valuation of its free variables.
pub fn word_accepts(
    automaton: &WordAutomaton,
    word: &[Symbol],
    assignment: &Assignment,
) -> Result<bool, CompileError> {
    Ok(automaton.accepts_letters(&encode_word(automaton, word, assignment)?))
}

/// All valuations of `ctx` over a word with n+1 nodes; used by tests and
/// the self-test oracle suites.
pub fn word_valuations(ctx: &Context, node_count: usize) -> Vec<Assignment> {
    let mut out = vec![Assignment::new()];
    for (name, sort) in ctx {
        let mut next = Vec::new();
        for a in &out {
            match sort {
                Sort::Node => {
                    for v in 0..node_count {
                        next.push(a.clone().node(name, v));
                    }
                }
                Sort::NodeSet => {
                    for mask in 0u64..(1 << node_count) {
                        next.push(
                            a.clone()
                                .set(name, (0..node_count).filter(|i| mask >> i & 1 == 1)),
                        );
                    }
                }
            }
        }
        out = next;
    }
    out
}

/// Convenience used throughout the decider: a sorted context from names
/// with sorts inferred by case convention.
pub fn context_of(vars: &[(&str, Sort)]) -> Context {
    let mut ctx: Context = vars.iter().map(|(n, s)| (n.to_string(), *s)).collect();
    ctx.sort();
    ctx
}

/// Group a formula's free variables into a context.
pub fn context_from_formula(f: &Formula) -> Context {
    f.free_vars().into_iter().collect::<BTreeMap<_, _>>().into_iter().collect()
}

/// Compile a formula over tree graphs into a deterministic bottom-up tree
/// automaton over the annotated ranked alphabet for `ctx`.
pub fn compile_tree(
    f: &Formula,
    ctx: &Context,
    sig: &Signature,
    cap: usize,
) -> Result<TreeAutomaton, CompileError> {
    let ranked: Vec<(Symbol, usize)> = match &sig.ranks {
        Some(m) => sig
            .node_labels
            .iter()
            .map(|s| (s.clone(), m[s]))
            .collect(),
        None => {
            return Err(CompileError::WrongSignature(
                "tree compilation needs a ranked signature".into(),
            ))
        }
    };
    let expanded = expand_keep_eq(f, sig)?;
    let free = expanded.free_vars();
    for (v, sort) in &free {
        match ctx.iter().find(|(n, _)| n == v) {
            None => {
                return Err(CompileError::Formula(crate::error::FormulaError::Unbound(
                    v.clone(),
                )))
            }
            Some((_, s)) if s != sort => {
                return Err(CompileError::Formula(
                    crate::error::FormulaError::SortMismatch(
                        v.clone(),
                        sort.to_string(),
                        s.to_string(),
                    ),
                ))
            }
            _ => {}
        }
    }
    let c = TreeCompiler {
        symbols: ranked,
        node_labels: sig.node_labels.clone(),
        max_rank: sig.max_rank(),
        cap,
    };
    let a = c.compile(&expanded)?;
    let full = c.alphabet(ctx.clone());
    let mut a = a.align_to(&full)?;
    for (v, sort) in ctx {
        if *sort == Sort::Node {
            a = a.product(&c.uniqueness(&full, v), |x, y| x && y, cap)?;
        }
    }
    Ok(a.reduce())
}

struct TreeCompiler {
    symbols: Vec<(Symbol, usize)>,
    node_labels: Vec<Symbol>,
    max_rank: usize,
    cap: usize,
}

/// Bottom-up atom automata share a tiny state scheme: 0 = nothing seen,
/// 1 = satisfied, 2 = dead. `combine` folds the children states and the
/// node's own bits into the next state.
impl TreeCompiler {
    fn alphabet(&self, vars: Context) -> BitAlphabet {
        BitAlphabet::for_trees(&self.symbols, vars)
    }

    fn compile(&self, f: &Formula) -> Result<TreeAutomaton, CompileError> {
        match f {
            Formula::True => Ok(TreeAutomaton::constant(self.alphabet(vec![]), true)),
            Formula::False => Ok(TreeAutomaton::constant(self.alphabet(vec![]), false)),
            Formula::Lab(sigma, x) => self.lab_atom(sigma, x),
            Formula::Edge(gamma, x, y) => self.edge_atom(gamma, x, y),
            Formula::In(x, set) => Ok(self.in_atom(x, set)),
            Formula::Eq(x, y) => Ok(self.eq_atom(x, y)),
            Formula::Not(g) => Ok(self.compile(g)?.complement()),
            Formula::And(a, b) => self.binop(a, b, |x, y| x && y),
            Formula::Or(a, b) => self.binop(a, b, |x, y| x || y),
            Formula::Implies(a, b) => self.binop(a, b, |x, y| !x || y),
            Formula::Iff(a, b) => self.binop(a, b, |x, y| x == y),
            Formula::Exists(sort, x, g) => {
                let inner = self.compile(g)?;
                self.quantify(inner, *sort, x)
            }
            Formula::Forall(sort, x, g) => {
                let inner = self.compile(g)?.complement();
                Ok(self.quantify(inner, *sort, x)?.complement().reduce())
            }
            Formula::Apply(..) => unreachable!("macros were expanded"),
        }
    }

    fn binop(
        &self,
        a: &Formula,
        b: &Formula,
        op: impl Fn(bool, bool) -> bool,
    ) -> Result<TreeAutomaton, CompileError> {
        let left = self.compile(a)?;
        let right = self.compile(b)?;
        let joined = left.alphabet.join_vars(&right.alphabet);
        let left = left.align_to(&joined)?;
        let right = right.align_to(&joined)?;
        left.product(&right, op, self.cap)
    }

    fn quantify(
        &self,
        inner: TreeAutomaton,
        sort: Sort,
        var: &str,
    ) -> Result<TreeAutomaton, CompileError> {
        let mut a = inner;
        if a.alphabet.bit_index(var).is_none() {
            let mut vars = a.alphabet.vars.clone();
            vars.push((var.to_string(), sort));
            a = a.align_to(&a.alphabet.with_vars(vars))?;
        }
        if sort == Sort::Node {
            let u = self.uniqueness(&a.alphabet, var);
            a = a.product(&u, |x, y| x && y, self.cap)?;
        }
        a.project_var(var, self.cap)
    }

    /// Materialize a small total automaton from a per-node combining
    /// function: `next(letter, children states) -> state`.
    fn from_fn(
        &self,
        alphabet: BitAlphabet,
        n_states: usize,
        default: u32,
        accepting: Vec<bool>,
        next: impl Fn(&BitAlphabet, usize, &[u32]) -> u32,
    ) -> TreeAutomaton {
        let mut delta = std::collections::HashMap::new();
        for l in 0..alphabet.len() {
            let k = alphabet.rank_of_letter(l);
            let mut tuple = vec![0u32; k];
            crate::compiler::tree::enumerate_tuples(n_states, k, 0, &mut tuple, &mut |t: &[u32]| {
                let target = next(&alphabet, l, t);
                if target != default {
                    delta.insert((l as u32, Box::from(t)), target);
                }
            });
        }
        TreeAutomaton {
            alphabet,
            n_states,
            default,
            delta,
            accepting,
        }
    }

    /// Exactly one occurrence of the variable's bit in the whole tree.
    fn uniqueness(&self, alphabet: &BitAlphabet, var: &str) -> TreeAutomaton {
        let bit = alphabet.bit_index(var).expect("bit present");
        self.from_fn(
            alphabet.clone(),
            3,
            2,
            vec![false, true, false],
            move |alpha, l, cs| {
                let mut count = usize::from(alpha.has_bit(l, bit));
                for &c in cs {
                    match c {
                        2 => return 2,
                        1 => count += 1,
                        _ => {}
                    }
                }
                if count > 1 {
                    2
                } else {
                    count as u32
                }
            },
        )
    }

    /// lab_sigma(x): the marked node carries label sigma.
    fn lab_atom(&self, sigma: &str, x: &str) -> Result<TreeAutomaton, CompileError> {
        if !self.node_labels.iter().any(|s| s == sigma) {
            return Err(CompileError::WrongSignature(format!("lab_{sigma}")));
        }
        let alpha = self.alphabet(vec![(x.to_string(), Sort::Node)]);
        let bit = alpha.bit_index(x).unwrap();
        let sigma_idx = alpha.base_index(sigma).unwrap();
        Ok(self.from_fn(
            alpha,
            3,
            2,
            vec![false, true, false],
            move |alpha, l, cs| {
                if cs.contains(&2) {
                    return 2;
                }
                let ones = cs.iter().filter(|&&c| c == 1).count();
                if alpha.has_bit(l, bit) {
                    if ones > 0 {
                        2
                    } else if alpha.base_of(l) == sigma_idx {
                        1
                    } else {
                        2
                    }
                } else {
                    match ones {
                        0 => 0,
                        1 => 1,
                        _ => 2,
                    }
                }
            },
        ))
    }

    /// edg_i(x,y): y is the i-th child of x.
    fn edge_atom(&self, gamma: &str, x: &str, y: &str) -> Result<TreeAutomaton, CompileError> {
        let child_pos: usize = match gamma.parse::<usize>() {
            Ok(i) if i >= 1 && i <= self.max_rank => i,
            _ => {
                return Err(CompileError::WrongSignature(format!("edg_{gamma}")));
            }
        };
        let alpha = self.alphabet(vec![(x.to_string(), Sort::Node), (y.to_string(), Sort::Node)]);
        let bx = alpha.bit_index(x).unwrap();
        let by = alpha.bit_index(y).unwrap();
        // 0 none, 1 y is the root of this subtree, 2 dead, 3 satisfied
        Ok(self.from_fn(
            alpha,
            4,
            2,
            vec![false, false, false, true],
            move |alpha, l, cs| {
                if cs.contains(&2) {
                    return 2;
                }
                let has_x = alpha.has_bit(l, bx);
                let has_y = alpha.has_bit(l, by);
                let sats = cs.iter().filter(|&&c| c == 3).count();
                let ys: Vec<usize> = cs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c == 1)
                    .map(|(i, _)| i)
                    .collect();
                if sats > 0 {
                    return if sats == 1 && !has_x && !has_y && ys.is_empty() {
                        3
                    } else {
                        2
                    };
                }
                if has_x {
                    // x here: y must sit exactly at child child_pos.
                    if !has_y && ys == vec![child_pos - 1] {
                        3
                    } else {
                        2
                    }
                } else if has_y {
                    if ys.is_empty() {
                        1
                    } else {
                        2
                    }
                } else if ys.is_empty() {
                    0
                } else {
                    // y's parent is not x, so the atom is false.
                    2
                }
            },
        ))
    }

    /// x in X.
    fn in_atom(&self, x: &str, set: &str) -> TreeAutomaton {
        let alpha = self.alphabet(vec![
            (x.to_string(), Sort::Node),
            (set.to_string(), Sort::NodeSet),
        ]);
        let bx = alpha.bit_index(x).unwrap();
        let bs = alpha.bit_index(set).unwrap();
        self.from_fn(
            alpha,
            3,
            2,
            vec![false, true, false],
            move |alpha, l, cs| {
                if cs.contains(&2) {
                    return 2;
                }
                let ones = cs.iter().filter(|&&c| c == 1).count();
                if alpha.has_bit(l, bx) {
                    if ones > 0 {
                        2
                    } else if alpha.has_bit(l, bs) {
                        1
                    } else {
                        2
                    }
                } else {
                    match ones {
                        0 => 0,
                        1 => 1,
                        _ => 2,
                    }
                }
            },
        )
    }

    /// x = y: both marks on the same node.
    fn eq_atom(&self, x: &str, y: &str) -> TreeAutomaton {
        let alpha = self.alphabet(vec![(x.to_string(), Sort::Node), (y.to_string(), Sort::Node)]);
        let bx = alpha.bit_index(x).unwrap();
        let by = alpha.bit_index(y).unwrap();
        self.from_fn(
            alpha,
            3,
            2,
            vec![false, true, false],
            move |alpha, l, cs| {
                if cs.contains(&2) {
                    return 2;
                }
                let ones = cs.iter().filter(|&&c| c == 1).count();
                let has_x = alpha.has_bit(l, bx);
                let has_y = alpha.has_bit(l, by);
                if has_x && has_y {
                    if ones > 0 {
                        2
                    } else {
                        1
                    }
                } else if has_x || has_y {
                    2
                } else {
                    match ones {
                        0 => 0,
                        1 => 1,
                        _ => 2,
                    }
                }
            },
        )
    }
}

/// Run a tree automaton on a term under a valuation of its free variables.
pub fn tree_accepts(
    automaton: &TreeAutomaton,
    t: &Term,
    assignment: &Assignment,
) -> Result<bool, CompileError> {
    let enc = crate::compiler::tree::encode_term(&automaton.alphabet, t, assignment)?;
    Ok(automaton.accepts_term(&enc))
}

/// All valuations of `ctx` over a term with the given node count.
pub fn tree_valuations(ctx: &Context, node_count: usize) -> Vec<Assignment> {
    word_valuations(ctx, node_count)
}
