//! Graph alphabets: node labels, edge labels, and optional ranks.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::StructureError;

/// Symbols are plain strings ("a", "#", "f", "1", ...).
pub type Symbol = String;

/// The node label used by string graphs.
pub const HASH: &str = "#";

/// A graph alphabet: a set of node labels and a set of edge labels.
///
/// When the signature describes trees, `ranks` assigns an arity to every
/// node label and the edge labels are the child indices "1".."m".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub node_labels: Vec<Symbol>,
    pub edge_labels: Vec<Symbol>,
    /// Arity per node label for ranked (tree) signatures.
    pub ranks: Option<BTreeMap<Symbol, usize>>,
}

impl Signature {
    pub fn new(node_labels: Vec<Symbol>, edge_labels: Vec<Symbol>) -> Self {
        Signature {
            node_labels,
            edge_labels,
            ranks: None,
        }
    }

    /// Signature of string graphs over edge alphabet `delta`: all nodes are
    /// labeled `#`, letters live on the edges.
    pub fn string(delta: &[&str]) -> Self {
        Signature::new(
            vec![HASH.to_string()],
            delta.iter().map(|s| s.to_string()).collect(),
        )
    }

    /// Ranked signature of trees: node labels with arities, edge labels
    /// "1".."m" where m is the maximal rank.
    pub fn tree(ranked: &[(&str, usize)]) -> Self {
        let max_rank = ranked.iter().map(|&(_, r)| r).max().unwrap_or(0);
        let mut ranks = BTreeMap::new();
        for &(s, r) in ranked {
            ranks.insert(s.to_string(), r);
        }
        Signature {
            node_labels: ranked.iter().map(|&(s, _)| s.to_string()).collect(),
            edge_labels: (1..=max_rank).map(|i| i.to_string()).collect(),
            ranks: Some(ranks),
        }
    }

    /// Signature of discrete graphs (no edges) over node alphabet `sigma`.
    pub fn dgraph(sigma: &[&str]) -> Self {
        Signature::new(sigma.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    pub fn has_node_label(&self, s: &str) -> bool {
        self.node_labels.iter().any(|l| l == s)
    }

    pub fn has_edge_label(&self, s: &str) -> bool {
        self.edge_labels.iter().any(|l| l == s)
    }

    pub fn rank(&self, s: &str) -> Result<usize, StructureError> {
        match &self.ranks {
            Some(m) => m
                .get(s)
                .copied()
                .ok_or_else(|| StructureError::UnknownSymbol(s.to_string())),
            None => Err(StructureError::NotRanked),
        }
    }

    pub fn max_rank(&self) -> usize {
        self.ranks
            .as_ref()
            .map(|m| m.values().copied().max().unwrap_or(0))
            .unwrap_or(0)
    }

    /// A signature is usable by a transducer only when both alphabets are
    /// nonempty; dgraph outputs are exempt from the edge requirement.
    pub fn validate_for_transducer(&self, allow_no_edges: bool) -> Result<(), StructureError> {
        if self.node_labels.is_empty() {
            return Err(StructureError::EmptyAlphabet("node labels".into()));
        }
        if self.edge_labels.is_empty() && !allow_no_edges {
            return Err(StructureError::EmptyAlphabet("edge labels".into()));
        }
        if let Some(ranks) = &self.ranks {
            for l in &self.node_labels {
                if !ranks.contains_key(l) {
                    return Err(StructureError::UnknownSymbol(l.clone()));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sigma: {}; gamma: {}",
            self.node_labels.join(" "),
            self.edge_labels.join(" ")
        )
    }
}
