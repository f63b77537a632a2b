//! The counting construction: for a pair of output letters (a,b) it
//! builds, over the annotated input alphabet, an automaton whose accepted
//! annotations certify "the first transducer's marked output position n1
//! carries a, the second's marked position n2 carries b", together with a
//! per-letter contribution map summing to (n1,n2).
//!
//! An annotation marks one input node per side (the origin of the chosen
//! output node) and one characteristic set per copy name, forced by the
//! formula to be exactly the output nodes preceding the chosen one in the
//! output order. Output order is reachability for string outputs and
//! pre-order for tree outputs, both encoded second-order over the
//! transducer's edge formulas, so the composed transducers with markers
//! appended never need to exist as formula tables.

use std::collections::BTreeMap;

use crate::compiler::{compile_tree, compile_word, TreeAutomaton, WordAutomaton};
use crate::error::DecideError;
use crate::formulas::{Context, Formula, Sort};
use crate::signature::Symbol;
use crate::transducers::{TransducerTable, VAR_X, VAR_Y};

/// The letter position to certify: a concrete output letter or the
/// end-of-output marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairLetter {
    Sym(Symbol),
    Marker,
}

/// One side of the pair construction.
pub struct Side<'a> {
    pub table: &'a TransducerTable,
    /// True when the output is a tree; positions then follow pre-order.
    pub tree_output: bool,
    /// Variable marking the chosen input node.
    pub chosen_var: String,
    /// One characteristic-set variable per copy name.
    pub z_vars: Vec<(Symbol, String)>,
}

impl<'a> Side<'a> {
    pub fn new(table: &'a TransducerTable, prefix: &str) -> Side<'a> {
        let tree_output = table.output_sig.ranks.is_some();
        Side {
            table,
            tree_output,
            chosen_var: format!("{prefix}pos"),
            z_vars: table
                .copies
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), format!("{}Z{i}", prefix.to_uppercase())))
                .collect(),
        }
    }

    /// Output letters this side can produce (pre-order node labels for
    /// trees, edge letters for strings).
    pub fn letters(&self) -> Vec<Symbol> {
        if self.tree_output {
            self.table.output_sig.node_labels.clone()
        } else {
            self.table.output_sig.edge_labels.clone()
        }
    }

    /// psi-validity: exactly one output label applies to (c, var).
    fn valid(&self, c: &Symbol, var: &str) -> Formula {
        let labels = &self.table.output_sig.node_labels;
        Formula::disj(labels.iter().map(|sigma| {
            let yes = self.subst1(self.table.node_formula(c, sigma), var);
            let nos = labels
                .iter()
                .filter(|s| *s != sigma)
                .map(|s| Formula::not(self.subst1(self.table.node_formula(c, s), var)));
            Formula::and(yes, Formula::conj(nos))
        }))
    }

    fn subst1(&self, f: &Formula, var: &str) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(VAR_X.to_string(), var.to_string());
        f.rename_free(&map)
    }

    fn subst2(&self, f: &Formula, x: &str, y: &str) -> Formula {
        let mut map = BTreeMap::new();
        map.insert(VAR_X.to_string(), x.to_string());
        map.insert(VAR_Y.to_string(), y.to_string());
        f.rename_free(&map)
    }

    /// Any output edge from (c,x) to (c2,y), without validity guards.
    fn edge_any(&self, c: &Symbol, c2: &Symbol, x: &str, y: &str) -> Formula {
        Formula::disj(
            self.table
                .output_sig
                .edge_labels
                .iter()
                .map(|g| self.subst2(self.table.edge_formula(c, c2, g), x, y)),
        )
    }

    /// (c_from, x) reaches (c_to, y) in the output graph: every family of
    /// sets, one per copy, containing (c_from,x) and closed under output
    /// edges between valid nodes, contains (c_to,y). Exact on valid nodes.
    fn reach(&self, c_from: &Symbol, c_to: &Symbol, x: &str, y: &str) -> Formula {
        let w_var = |i: usize| format!("W{}_{i}", self.chosen_var);
        let copies = &self.table.copies;
        let closed = Formula::conj(copies.iter().enumerate().flat_map(|(di, d)| {
            copies.iter().enumerate().map(move |(dj, d2)| {
                Formula::forall(
                    "s",
                    Formula::forall(
                        "t",
                        Formula::implies(
                            Formula::conj([
                                Formula::member("s", &w_var(di)),
                                self.valid(d, "s"),
                                self.valid(d2, "t"),
                                self.edge_any(d, d2, "s", "t"),
                            ]),
                            Formula::member("t", &w_var(dj)),
                        ),
                    ),
                )
            })
        }));
        let from_idx = copies.iter().position(|c| c == c_from).unwrap();
        let to_idx = copies.iter().position(|c| c == c_to).unwrap();
        let body = Formula::implies(
            Formula::and(Formula::member(x, &w_var(from_idx)), closed),
            Formula::member(y, &w_var(to_idx)),
        );
        (0..copies.len()).rev().fold(body, |acc, i| {
            Formula::forall_set(&w_var(i), acc)
        })
    }

    /// (c,x) comes before or equals (c0,y) in pre-order: either an
    /// ancestor-or-self, or the branches split at a common node with x's
    /// branch on a smaller child index.
    fn preleq(&self, c: &Symbol, c0: &Symbol, x: &str, y: &str) -> Formula {
        let anc = self.reach(c, c0, x, y);
        let copies = &self.table.copies;
        let max_rank = self.table.output_sig.max_rank();
        let mut splits = Vec::new();
        for d in copies {
            for d1 in copies {
                for d2 in copies {
                    for i in 1..=max_rank {
                        for j in (i + 1)..=max_rank {
                            let ei = self.subst2(
                                self.table.edge_formula(d, d1, &i.to_string()),
                                "p",
                                "s",
                            );
                            let ej = self.subst2(
                                self.table.edge_formula(d, d2, &j.to_string()),
                                "p",
                                "t",
                            );
                            if ei == Formula::False || ej == Formula::False {
                                continue;
                            }
                            splits.push(Formula::exists(
                                "p",
                                Formula::exists(
                                    "s",
                                    Formula::exists(
                                        "t",
                                        Formula::conj([
                                            self.valid(d, "p"),
                                            self.valid(d1, "s"),
                                            self.valid(d2, "t"),
                                            ei,
                                            ej,
                                            self.reach(d1, c, "s", x),
                                            self.reach(d2, c0, "t", y),
                                        ]),
                                    ),
                                ),
                            ));
                        }
                    }
                }
            }
        }
        Formula::or(anc, Formula::disj(splits))
    }

    /// Output-order precedence used for the characteristic sets.
    fn precedes(&self, c: &Symbol, c0: &Symbol, x: &str, y: &str) -> Formula {
        if self.tree_output {
            self.preleq(c, c0, x, y)
        } else {
            self.reach(c, c0, x, y)
        }
    }

    /// The chosen output node's next letter is `letter`.
    fn next_condition(&self, c0: &Symbol, letter: &PairLetter) -> Formula {
        let x0 = self.chosen_var.clone();
        if self.tree_output {
            match letter {
                // the chosen node itself carries the label
                PairLetter::Sym(s) => {
                    if self.table.output_sig.has_node_label(s) {
                        self.subst1(self.table.node_formula(c0, s), &x0)
                    } else {
                        Formula::False
                    }
                }
                // pre-order-last: nothing comes strictly after
                PairLetter::Marker => Formula::not(Formula::exists(
                    "q",
                    Formula::disj(self.table.copies.iter().map(|c| {
                        Formula::and(
                            self.valid(c, "q"),
                            Formula::not(self.preleq(c, c0, "q", &x0)),
                        )
                    })),
                )),
            }
        } else {
            match letter {
                PairLetter::Sym(s) => {
                    if self.table.output_sig.has_edge_label(s) {
                        Formula::exists(
                            "q",
                            Formula::disj(self.table.copies.iter().map(|c2| {
                                Formula::and(
                                    self.valid(c2, "q"),
                                    self.subst2(self.table.edge_formula(c0, c2, s), &x0, "q"),
                                )
                            })),
                        )
                    } else {
                        Formula::False
                    }
                }
                // string-final node: no outgoing output edge
                PairLetter::Marker => Formula::not(Formula::exists(
                    "q",
                    Formula::disj(self.table.copies.iter().map(|c2| {
                        Formula::and(self.valid(c2, "q"), self.edge_any(c0, c2, &x0, "q"))
                    })),
                )),
            }
        }
    }

    /// Everything about this side that is independent of the pair letter:
    /// the domain formula, validity of the chosen node for copy c0, and
    /// the characteristic-set definitions.
    pub fn base_formula(&self, c0: &Symbol) -> Formula {
        let x0 = self.chosen_var.clone();
        let zdefs = self.z_vars.iter().map(|(c, z)| {
            Formula::forall(
                "u",
                Formula::iff(
                    Formula::member("u", z),
                    Formula::and(self.valid(c, "u"), self.precedes(c, c0, "u", &x0)),
                ),
            )
        });
        Formula::conj(
            std::iter::once(self.table.dom.clone())
                .chain(std::iter::once(self.valid(c0, &x0)))
                .chain(zdefs),
        )
    }

    /// Marker positions sit one past the final output node for tree
    /// outputs (the pre-order string has one letter per node), so the
    /// chosen node contributes an extra unit there. String outputs place
    /// the marker edge on the final node itself and need no correction.
    pub fn marker_extra(&self, letter: &PairLetter) -> bool {
        self.tree_output && *letter == PairLetter::Marker
    }
}

/// The free-variable context of the whole certificate.
pub fn pair_context(side1: &Side, side2: &Side) -> Context {
    let mut ctx: Context = vec![
        (side1.chosen_var.clone(), Sort::Node),
        (side2.chosen_var.clone(), Sort::Node),
    ];
    for (_, z) in side1.z_vars.iter().chain(side2.z_vars.iter()) {
        ctx.push((z.clone(), Sort::NodeSet));
    }
    ctx.sort();
    ctx
}

/// A compiled certificate automaton with its per-letter contribution map
/// into N^2: summing contributions over an accepted annotation's
/// positions yields exactly the certified pair of output positions.
pub enum CountingAutomaton {
    Word(WordAutomaton, Vec<(u64, u64)>),
    Tree(TreeAutomaton, Vec<(u64, u64)>),
}

/// Contribution of each annotated letter: the number of characteristic
/// bits set per side, plus the marker correction on the chosen node.
fn contributions<A: Fn(usize, &str) -> bool>(
    len: usize,
    has_bit: A,
    side1: &Side,
    side2: &Side,
    l1: &PairLetter,
    l2: &PairLetter,
) -> Vec<(u64, u64)> {
    (0..len)
        .map(|letter| {
            let mut m = 0u64;
            let mut n = 0u64;
            for (_, z) in &side1.z_vars {
                if has_bit(letter, z) {
                    m += 1;
                }
            }
            for (_, z) in &side2.z_vars {
                if has_bit(letter, z) {
                    n += 1;
                }
            }
            if side1.marker_extra(l1) && has_bit(letter, &side1.chosen_var) {
                m += 1;
            }
            if side2.marker_extra(l2) && has_bit(letter, &side2.chosen_var) {
                n += 1;
            }
            (m, n)
        })
        .collect()
}

/// Build the counting automaton for one choice of chosen copies and one
/// letter pair. `tree_input` picks the tree or word compiler.
#[allow(clippy::too_many_arguments)]
pub fn counting_automaton(
    side1: &Side,
    side2: &Side,
    c0_1: &Symbol,
    c0_2: &Symbol,
    l1: &PairLetter,
    l2: &PairLetter,
    tree_input: bool,
    cap: usize,
) -> Result<CountingAutomaton, DecideError> {
    let formula = Formula::conj([
        side1.base_formula(c0_1),
        side2.base_formula(c0_2),
        side1.next_condition(c0_1, l1),
        side2.next_condition(c0_2, l2),
    ]);
    let ctx = pair_context(side1, side2);
    let sig = &side1.table.input_sig;
    if tree_input {
        let a = compile_tree(&formula, &ctx, sig, cap)?;
        let alpha = a.alphabet.clone();
        let contrib = contributions(
            alpha.len(),
            |l, v| alpha.bit_index(v).is_some_and(|b| alpha.has_bit(l, b)),
            side1,
            side2,
            l1,
            l2,
        );
        Ok(CountingAutomaton::Tree(a, contrib))
    } else {
        let a = compile_word(&formula, &ctx, sig, cap)?;
        let alpha = a.alphabet.clone();
        let contrib = contributions(
            alpha.len(),
            |l, v| alpha.bit_index(v).is_some_and(|b| alpha.has_bit(l, b)),
            side1,
            side2,
            l1,
            l2,
        );
        Ok(CountingAutomaton::Word(a, contrib))
    }
}
