//! Equivalence of deterministic MSO-definable string and tree transducers,
//! restricted to a user-supplied domain language.
//!
//! The crate provides:
//!
//! * graphs and the standard encodings of words, trees and discrete graphs
//!   ([`structures`]);
//! * MSO formulas with a direct model-checking oracle ([`formulas`]);
//! * compilation of formulas on words and trees into deterministic automata
//!   ([`compiler`]);
//! * MSO transducers, their evaluation semantics and the constructions
//!   used by the decision procedure ([`transducers`]);
//! * grammars, Parikh images and semilinear sets ([`parikh`]);
//! * the equivalence decision procedure itself ([`decider`]).

pub mod error;
pub mod signature;
pub mod structures;
pub mod formulas;
pub mod corpus;
pub mod decider;
pub mod oracle;
pub mod parikh;
pub mod transducers;

pub use error::{CompileError, DecideError, FormulaError, GrammarError, StructureError, TransducerError};
pub use signature::{Signature, Symbol};
pub use structures::{Graph, ParikhVector, Term};
pub mod compiler;
