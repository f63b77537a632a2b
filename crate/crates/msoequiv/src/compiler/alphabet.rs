//! Annotated alphabets: a base symbol crossed with one bit per free
//! variable. First-order bits are constrained to occur exactly once by a
//! uniqueness automaton conjoined at quantification time and on the final
//! compile result.

use crate::formulas::Sort;
use crate::signature::Symbol;

/// Padding symbol closing every node-word; a word a1..an is read as the
/// node-word a1..an PAD so that positions line up with string-graph nodes.
pub const PAD: &str = "\u{22a3}";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitAlphabet {
    /// Base symbols. For words: the edge alphabet plus [`PAD`] last. For
    /// trees: the ranked node symbols.
    pub base: Vec<Symbol>,
    /// Rank per base symbol (tree alphabets only).
    pub ranks: Option<Vec<usize>>,
    /// One bit per variable, kept sorted by name so bit order is canonical.
    pub vars: Vec<(String, Sort)>,
}

impl BitAlphabet {
    pub fn for_words(delta: &[Symbol], vars: Vec<(String, Sort)>) -> Self {
        let mut base: Vec<Symbol> = delta.to_vec();
        debug_assert!(!base.iter().any(|s| s == PAD));
        base.push(PAD.to_string());
        let mut alpha = BitAlphabet {
            base,
            ranks: None,
            vars,
        };
        alpha.sort_vars();
        alpha
    }

    pub fn for_trees(symbols: &[(Symbol, usize)], vars: Vec<(String, Sort)>) -> Self {
        let mut alpha = BitAlphabet {
            base: symbols.iter().map(|(s, _)| s.clone()).collect(),
            ranks: Some(symbols.iter().map(|(_, r)| *r).collect()),
            vars,
        };
        alpha.sort_vars();
        alpha
    }

    fn sort_vars(&mut self) {
        self.vars.sort();
        self.vars.dedup();
    }

    pub fn bits(&self) -> usize {
        self.vars.len()
    }

    pub fn len(&self) -> usize {
        self.base.len() << self.bits()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Letter index from base index and bit pattern.
    pub fn letter(&self, base_idx: usize, bits: usize) -> usize {
        debug_assert!(bits < (1 << self.bits()));
        (base_idx << self.bits()) | bits
    }

    pub fn base_of(&self, letter: usize) -> usize {
        letter >> self.bits()
    }

    pub fn bits_of(&self, letter: usize) -> usize {
        letter & ((1 << self.bits()) - 1)
    }

    pub fn rank_of_letter(&self, letter: usize) -> usize {
        match &self.ranks {
            Some(rs) => rs[self.base_of(letter)],
            None => 0,
        }
    }

    pub fn bit_index(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|(v, _)| v == var)
    }

    pub fn base_index(&self, symbol: &str) -> Option<usize> {
        self.base.iter().position(|s| s == symbol)
    }

    pub fn has_bit(&self, letter: usize, var_idx: usize) -> bool {
        self.bits_of(letter) >> var_idx & 1 == 1
    }

    /// Same base, different variable set.
    pub fn with_vars(&self, vars: Vec<(String, Sort)>) -> BitAlphabet {
        let mut alpha = BitAlphabet {
            base: self.base.clone(),
            ranks: self.ranks.clone(),
            vars,
        };
        alpha.sort_vars();
        alpha
    }

    pub fn same_base(&self, other: &BitAlphabet) -> bool {
        self.base == other.base && self.ranks == other.ranks
    }

    /// Map a letter of `self` to the letter of `target` with the same base
    /// symbol and the same values on shared bits, zero elsewhere. `target`
    /// must have the same base.
    pub fn embed_letter(&self, letter: usize, target: &BitAlphabet) -> usize {
        let base = self.base_of(letter);
        let mut bits = 0usize;
        for (i, (name, _)) in target.vars.iter().enumerate() {
            if let Some(j) = self.bit_index(name) {
                if self.has_bit(letter, j) {
                    bits |= 1 << i;
                }
            }
        }
        target.letter(base, bits)
    }

    /// Union of two variable sets over a shared base.
    pub fn join_vars(&self, other: &BitAlphabet) -> BitAlphabet {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        self.with_vars(vars)
    }
}
