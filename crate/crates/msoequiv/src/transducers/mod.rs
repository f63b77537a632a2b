//! MSO transducers: the model, evaluation semantics, and the
//! constructions the decision procedure is built from.
//!
//! A transducer table follows the standard definition: a finite copy set
//! C, a closed domain formula, node formulas psi_{c,sigma}(x) and edge
//! formulas chi_{c,c',gamma}(x,y) over the input signature, plus an
//! ordered list of set-variable parameters whose valuations make the
//! transducer nondeterministic. Missing formulas default to false.
//!
//! Compositions are represented as values: `Pipe` chains two transducers
//! semantically and `Union` pairs their outputs by disjoint union;
//! neither is ever flattened back into a single formula table.

pub mod build;
pub mod eval;
pub mod parse;

use std::collections::BTreeMap;

use crate::formulas::Formula;
use crate::signature::{Signature, Symbol};

pub use build::{
    append_marker, disjoint_union, domain_symdiff, flatten, marker_table, pair_counter,
    position_extractor, preorder_flattener,
};

pub use eval::{evaluate, evaluate_detailed, pipe_evaluate, Evaluated, PARAM_EVAL_CAP};
pub use parse::parse_transducer_file;

/// The distinguished free variable of node formulas.
pub const VAR_X: &str = "x";
/// The second distinguished free variable of edge formulas.
pub const VAR_Y: &str = "y";

/// Structural class of evaluation outputs, with its validation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputClass {
    /// Output graphs are string graphs.
    StringGraph,
    /// Output graphs are trees over the output signature's rank map.
    TreeGraph,
    /// Output graphs are discrete (edge-free).
    DGraph,
}

impl OutputClass {
    pub fn name(self) -> &'static str {
        match self {
            OutputClass::StringGraph => "string graph",
            OutputClass::TreeGraph => "tree",
            OutputClass::DGraph => "dgraph",
        }
    }
}

/// A transducer given by formula families.
#[derive(Debug, Clone)]
pub struct TransducerTable {
    pub copies: Vec<Symbol>,
    /// Ordered parameter list Y1..Yp; empty means deterministic.
    pub params: Vec<Symbol>,
    pub input_sig: Signature,
    pub output_sig: Signature,
    pub dom: Formula,
    /// psi_{c,sigma}(x); missing entries are false.
    pub node_formulas: BTreeMap<(Symbol, Symbol), Formula>,
    /// chi_{c,c',gamma}(x,y); missing entries are false.
    pub edge_formulas: BTreeMap<(Symbol, Symbol, Symbol), Formula>,
    pub kind: OutputClass,
}

impl TransducerTable {
    pub fn node_formula(&self, c: &str, sigma: &str) -> &Formula {
        self.node_formulas
            .get(&(c.to_string(), sigma.to_string()))
            .unwrap_or(&Formula::False)
    }

    pub fn edge_formula(&self, c: &str, c2: &str, gamma: &str) -> &Formula {
        self.edge_formulas
            .get(&(c.to_string(), c2.to_string(), gamma.to_string()))
            .unwrap_or(&Formula::False)
    }
}

/// A transducer value: a table, or a composition kept at evaluation level.
#[derive(Debug, Clone)]
pub enum MsoTransducer {
    Table(TransducerTable),
    /// Pipe(m1, m2) evaluates m2 on every output of m1.
    Pipe(Box<MsoTransducer>, Box<MsoTransducer>),
    /// Union(m1, m2) pairs outputs by disjoint union.
    Union(Box<MsoTransducer>, Box<MsoTransducer>),
}

impl MsoTransducer {
    pub fn table(t: TransducerTable) -> MsoTransducer {
        MsoTransducer::Table(t)
    }

    pub fn input_sig(&self) -> &Signature {
        match self {
            MsoTransducer::Table(t) => &t.input_sig,
            MsoTransducer::Pipe(a, _) => a.input_sig(),
            MsoTransducer::Union(a, _) => a.input_sig(),
        }
    }

    pub fn output_sig(&self) -> &Signature {
        match self {
            MsoTransducer::Table(t) => &t.output_sig,
            MsoTransducer::Pipe(_, b) => b.output_sig(),
            // Union output signatures were merged at construction time.
            MsoTransducer::Union(_, b) => b.output_sig(),
        }
    }

    pub fn output_class(&self) -> OutputClass {
        match self {
            MsoTransducer::Table(t) => t.kind,
            MsoTransducer::Pipe(_, b) => b.output_class(),
            MsoTransducer::Union(_, b) => b.output_class(),
        }
    }

    /// Deterministic means no parameters anywhere.
    pub fn is_deterministic(&self) -> bool {
        match self {
            MsoTransducer::Table(t) => t.params.is_empty(),
            MsoTransducer::Pipe(a, b) | MsoTransducer::Union(a, b) => {
                a.is_deterministic() && b.is_deterministic()
            }
        }
    }

    /// The underlying table of a plain transducer, if it is one.
    pub fn as_table(&self) -> Option<&TransducerTable> {
        match self {
            MsoTransducer::Table(t) => Some(t),
            _ => None,
        }
    }
}
