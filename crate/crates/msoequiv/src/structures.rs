//! Concrete graphs and the encodings of strings, trees and discrete graphs,
//! plus Parikh vectors.
//!
//! A word w = a1..an is identified with the graph that has n+1 nodes labeled
//! `#` and an ai-labeled edge from node i to node i+1. A tree over a ranked
//! alphabet is a graph whose sigma-nodes have outgoing edges labeled
//! 1..rank(sigma). A dgraph is a graph without edges, i.e. a multiset of
//! labeled nodes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::StructureError;
use crate::signature::{Symbol, HASH};

pub type NodeId = usize;

/// A finite node-labeled, edge-labeled directed graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Graph {
    /// Node i carries label `labels[i]`.
    labels: Vec<Symbol>,
    /// Edges as (source, label, target), sorted and deduplicated.
    edges: Vec<(NodeId, Symbol, NodeId)>,
}

impl Graph {
    pub fn new(labels: Vec<Symbol>, mut edges: Vec<(NodeId, Symbol, NodeId)>) -> Result<Self, StructureError> {
        for (s, _, t) in &edges {
            if *s >= labels.len() {
                return Err(StructureError::DanglingEdge(*s));
            }
            if *t >= labels.len() {
                return Err(StructureError::DanglingEdge(*t));
            }
        }
        edges.sort();
        edges.dedup();
        Ok(Graph { labels, edges })
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.labels.len()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v]
    }

    pub fn edges(&self) -> &[(NodeId, Symbol, NodeId)] {
        &self.edges
    }

    pub fn has_edge(&self, s: NodeId, label: &str, t: NodeId) -> bool {
        self.edges.iter().any(|(a, l, b)| *a == s && l == label && *b == t)
    }

    pub fn out_edges(&self, v: NodeId) -> impl Iterator<Item = &(NodeId, Symbol, NodeId)> {
        self.edges.iter().filter(move |(s, _, _)| *s == v)
    }

    pub fn in_edges(&self, v: NodeId) -> impl Iterator<Item = &(NodeId, Symbol, NodeId)> {
        self.edges.iter().filter(move |(_, _, t)| *t == v)
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_edges(v).count()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_edges(v).count()
    }

    /// Disjoint union; nodes of `other` are renumbered after `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.labels.len();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|(s, l, t)| (s + offset, l.clone(), t + offset)),
        );
        Graph::new(labels, edges).expect("offsets stay in range")
    }

    /// Canonical form up to isomorphism for dgraphs: sorted label multiset.
    pub fn sorted_labels(&self) -> Vec<Symbol> {
        let mut ls = self.labels.clone();
        ls.sort();
        ls
    }

    /// True when every node is labeled `#`, nodes form a single path
    /// following the edges, and in/out degrees are at most one.
    pub fn validate_string_graph(&self) -> Result<(), StructureError> {
        let fail = |msg: &str| Err(StructureError::NotAValid("string graph".into(), msg.into()));
        if self.labels.is_empty() {
            return fail("no nodes");
        }
        for v in self.nodes() {
            if self.label(v) != HASH {
                return fail("node not labeled #");
            }
            if self.out_degree(v) > 1 || self.in_degree(v) > 1 {
                return fail("degree above one");
            }
        }
        let starts: Vec<_> = self.nodes().filter(|&v| self.in_degree(v) == 0).collect();
        let ends: Vec<_> = self.nodes().filter(|&v| self.out_degree(v) == 0).collect();
        if starts.len() != 1 || ends.len() != 1 {
            return fail("not a single path");
        }
        // Walk the path; it must cover every node.
        let mut seen = 1;
        let mut cur = starts[0];
        while let Some((_, _, t)) = self.out_edges(cur).next() {
            cur = *t;
            seen += 1;
            if seen > self.node_count() {
                return fail("cycle");
            }
        }
        if seen != self.node_count() {
            return fail("disconnected");
        }
        Ok(())
    }

    /// True when the graph is a tree over the ranked signature implied by
    /// `ranks`: unique root, acyclic, connected, and every sigma-node has
    /// exactly rank(sigma) outgoing edges labeled 1..rank(sigma).
    pub fn validate_tree_graph(&self, ranks: &BTreeMap<Symbol, usize>) -> Result<(), StructureError> {
        let fail = |msg: String| Err(StructureError::NotAValid("tree".into(), msg));
        if self.labels.is_empty() {
            return fail("no nodes".into());
        }
        let roots: Vec<_> = self.nodes().filter(|&v| self.in_degree(v) == 0).collect();
        if roots.len() != 1 {
            return fail(format!("{} roots", roots.len()));
        }
        for v in self.nodes() {
            let rank = match ranks.get(self.label(v)) {
                Some(r) => *r,
                None => return fail(format!("unknown symbol {}", self.label(v))),
            };
            let mut out: Vec<&str> = self.out_edges(v).map(|(_, l, _)| l.as_str()).collect();
            out.sort();
            let expected: Vec<String> = (1..=rank).map(|i| i.to_string()).collect();
            let mut expected: Vec<&str> = expected.iter().map(|s| s.as_str()).collect();
            expected.sort();
            if out != expected {
                return fail(format!("node {v} has child edges {out:?}, wanted 1..{rank}"));
            }
            if self.in_degree(v) > 1 {
                return fail(format!("node {v} has several parents"));
            }
        }
        // Connectivity and acyclicity: BFS from the root covers all nodes.
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([roots[0]]);
        while let Some(v) = queue.pop_front() {
            if !seen.insert(v) {
                return fail("cycle".into());
            }
            for (_, _, t) in self.out_edges(v) {
                queue.push_back(*t);
            }
        }
        if seen.len() != self.node_count() {
            return fail("disconnected".into());
        }
        Ok(())
    }

    pub fn validate_dgraph(&self) -> Result<(), StructureError> {
        if self.edges.is_empty() {
            Ok(())
        } else {
            Err(StructureError::NotAValid(
                "dgraph".into(),
                "has edges".into(),
            ))
        }
    }
}

/// Encode a word as its string graph.
pub fn string_to_graph(word: &[Symbol], delta: &[Symbol]) -> Result<Graph, StructureError> {
    for a in word {
        if !delta.contains(a) {
            return Err(StructureError::UnknownSymbol(a.clone()));
        }
    }
    let labels = vec![HASH.to_string(); word.len() + 1];
    let edges = word
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.clone(), i + 1))
        .collect();
    Graph::new(labels, edges)
}

/// Recover the word from a string graph.
pub fn graph_to_string(g: &Graph) -> Result<Vec<Symbol>, StructureError> {
    g.validate_string_graph()?;
    let mut cur = g.nodes().find(|&v| g.in_degree(v) == 0).unwrap();
    let mut word = Vec::new();
    while let Some((_, l, t)) = g.out_edges(cur).next() {
        word.push(l.clone());
        cur = *t;
    }
    Ok(word)
}

/// The i-th letter of a word, 1-based.
pub fn letter_at(word: &[Symbol], i: usize) -> Result<&Symbol, StructureError> {
    if i == 0 || i > word.len() {
        return Err(StructureError::PositionOutOfRange(i, word.len()));
    }
    Ok(&word[i - 1])
}

/// A term over a ranked alphabet, the tree counterpart of a word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub symbol: Symbol,
    pub children: Vec<Term>,
}

impl Term {
    pub fn new(symbol: &str, children: Vec<Term>) -> Term {
        Term {
            symbol: symbol.to_string(),
            children,
        }
    }

    pub fn leaf(symbol: &str) -> Term {
        Term::new(symbol, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Term::node_count).sum::<usize>()
    }

    /// Node labels in pre-order.
    pub fn preorder_labels(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.node_count());
        self.collect_preorder(&mut out);
        out
    }

    fn collect_preorder(&self, out: &mut Vec<Symbol>) {
        out.push(self.symbol.clone());
        for c in &self.children {
            c.collect_preorder(out);
        }
    }

    /// Parse `f(a,g(b))` style notation.
    pub fn parse(text: &str) -> Result<Term, StructureError> {
        let mut chars = text.char_indices().peekable();
        let t = Term::parse_inner(text, &mut chars)?;
        while let Some((_, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else {
                return Err(StructureError::NotAValid(
                    "term".into(),
                    format!("trailing input after term: `{}`", &text[chars.peek().unwrap().0..]),
                ));
            }
        }
        Ok(t)
    }

    fn parse_inner(
        text: &str,
        chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>,
    ) -> Result<Term, StructureError> {
        while matches!(chars.peek(), Some((_, c)) if c.is_whitespace()) {
            chars.next();
        }
        let start = match chars.peek() {
            Some((i, _)) => *i,
            None => {
                return Err(StructureError::NotAValid(
                    "term".into(),
                    "empty input".into(),
                ))
            }
        };
        let mut end = start;
        while let Some((i, c)) = chars.peek() {
            if c.is_alphanumeric() || *c == '_' || *c == '#' || *c == '$' {
                end = i + c.len_utf8();
                chars.next();
            } else {
                break;
            }
        }
        if end == start {
            return Err(StructureError::NotAValid(
                "term".into(),
                format!("expected a symbol at byte {start}"),
            ));
        }
        let symbol = text[start..end].to_string();
        let mut children = Vec::new();
        if matches!(chars.peek(), Some((_, '('))) {
            chars.next();
            loop {
                children.push(Term::parse_inner(text, chars)?);
                while matches!(chars.peek(), Some((_, c)) if c.is_whitespace()) {
                    chars.next();
                }
                match chars.next() {
                    Some((_, ',')) => continue,
                    Some((_, ')')) => break,
                    _ => {
                        return Err(StructureError::NotAValid(
                            "term".into(),
                            "expected `,` or `)`".into(),
                        ))
                    }
                }
            }
        }
        Ok(Term { symbol, children })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if !self.children.is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Encode a term as a tree graph; node 0 is the root and children follow in
/// pre-order.
pub fn tree_to_graph(t: &Term, ranks: &BTreeMap<Symbol, usize>) -> Result<Graph, StructureError> {
    fn walk(
        t: &Term,
        ranks: &BTreeMap<Symbol, usize>,
        labels: &mut Vec<Symbol>,
        edges: &mut Vec<(NodeId, Symbol, NodeId)>,
    ) -> Result<NodeId, StructureError> {
        let rank = ranks
            .get(&t.symbol)
            .copied()
            .ok_or_else(|| StructureError::UnknownSymbol(t.symbol.clone()))?;
        if rank != t.children.len() {
            return Err(StructureError::RankMismatch {
                symbol: t.symbol.clone(),
                expected: rank,
                found: t.children.len(),
            });
        }
        let me = labels.len();
        labels.push(t.symbol.clone());
        for (i, c) in t.children.iter().enumerate() {
            let child = walk(c, ranks, labels, edges)?;
            edges.push((me, (i + 1).to_string(), child));
        }
        Ok(me)
    }
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    walk(t, ranks, &mut labels, &mut edges)?;
    Graph::new(labels, edges)
}

/// Recover the term from a tree graph.
pub fn graph_to_tree(g: &Graph, ranks: &BTreeMap<Symbol, usize>) -> Result<Term, StructureError> {
    g.validate_tree_graph(ranks)?;
    fn build(g: &Graph, v: NodeId, ranks: &BTreeMap<Symbol, usize>) -> Term {
        let rank = ranks[g.label(v)];
        let mut children = Vec::with_capacity(rank);
        for i in 1..=rank {
            let label = i.to_string();
            let (_, _, t) = g
                .out_edges(v)
                .find(|(_, l, _)| *l == label)
                .expect("validated tree has all child edges");
            children.push(build(g, *t, ranks));
        }
        Term {
            symbol: g.label(v).to_string(),
            children,
        }
    }
    let root = g.nodes().find(|&v| g.in_degree(v) == 0).unwrap();
    Ok(build(g, root, ranks))
}

/// Parse the `.gr` graph text format: node lines `id label`, edge lines
/// `src label dst`. Node ids are renumbered densely in first-seen order.
pub fn parse_graph_file(text: &str) -> Result<Graph, StructureError> {
    let mut names: Vec<String> = Vec::new();
    let mut labels: Vec<Symbol> = Vec::new();
    let mut edges_raw: Vec<(String, Symbol, String)> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            [id, label] => {
                if names.contains(&id.to_string()) {
                    return Err(StructureError::NotAValid(
                        "graph".into(),
                        format!("node {id} declared twice"),
                    ));
                }
                names.push(id.to_string());
                labels.push(label.to_string());
            }
            [src, label, dst] => {
                edges_raw.push((src.to_string(), label.to_string(), dst.to_string()));
            }
            _ => {
                return Err(StructureError::NotAValid(
                    "graph".into(),
                    format!("bad line `{line}`"),
                ))
            }
        }
    }
    let resolve = |n: &str| -> Result<NodeId, StructureError> {
        names
            .iter()
            .position(|x| x == n)
            .ok_or_else(|| StructureError::NotAValid("graph".into(), format!("unknown node {n}")))
    };
    let edges = edges_raw
        .into_iter()
        .map(|(s, l, t)| Ok((resolve(&s)?, l, resolve(&t)?)))
        .collect::<Result<Vec<_>, StructureError>>()?;
    Graph::new(labels, edges)
}

/// Render a graph in the `.gr` text format with dense integer ids.
pub fn graph_to_gr(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.nodes() {
        out.push_str(&format!("{v} {}\n", g.label(v)));
    }
    for (s, l, t) in g.edges() {
        out.push_str(&format!("{s} {l} {t}\n"));
    }
    out
}

/// Per-symbol occurrence counts under a fixed symbol ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParikhVector {
    pub alphabet: Vec<Symbol>,
    pub counts: Vec<u64>,
}

impl ParikhVector {
    pub fn zero(alphabet: &[Symbol]) -> ParikhVector {
        ParikhVector {
            alphabet: alphabet.to_vec(),
            counts: vec![0; alphabet.len()],
        }
    }

    pub fn add(&self, other: &ParikhVector) -> Result<ParikhVector, StructureError> {
        if self.alphabet != other.alphabet {
            return Err(StructureError::DimensionMismatch(
                self.counts.len(),
                other.counts.len(),
            ));
        }
        Ok(ParikhVector {
            alphabet: self.alphabet.clone(),
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Parikh vector of a dgraph (or any graph's node labels).
pub fn parikh_of_graph(g: &Graph, alphabet: &[Symbol]) -> Result<ParikhVector, StructureError> {
    let mut v = ParikhVector::zero(alphabet);
    for n in g.nodes() {
        match alphabet.iter().position(|a| a == g.label(n)) {
            Some(i) => v.counts[i] += 1,
            None => return Err(StructureError::UnknownSymbol(g.label(n).to_string())),
        }
    }
    Ok(v)
}

/// Parikh vector of a word.
pub fn parikh_of_word(w: &[Symbol], alphabet: &[Symbol]) -> Result<ParikhVector, StructureError> {
    let mut v = ParikhVector::zero(alphabet);
    for a in w {
        match alphabet.iter().position(|x| x == a) {
            Some(i) => v.counts[i] += 1,
            None => return Err(StructureError::UnknownSymbol(a.clone())),
        }
    }
    Ok(v)
}

/// The unique dgraph (up to isomorphism) with the given Parikh vector.
pub fn dgr(v: &ParikhVector) -> Graph {
    let mut labels = Vec::new();
    for (i, c) in v.counts.iter().enumerate() {
        for _ in 0..*c {
            labels.push(v.alphabet[i].clone());
        }
    }
    Graph::new(labels, Vec::new()).expect("no edges")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(s: &str) -> Vec<Symbol> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn empty_word_is_a_single_hash_node() {
        let g = string_to_graph(&[], &syms("ab")).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edges().len(), 0);
        assert_eq!(g.label(0), "#");
        g.validate_string_graph().unwrap();
    }

    #[test]
    fn ab_has_three_nodes_and_two_edges() {
        let g = string_to_graph(&syms("ab"), &syms("ab")).unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(g.has_edge(0, "a", 1));
        assert!(g.has_edge(1, "b", 2));
    }

    #[test]
    fn word_round_trip() {
        let w = syms("bab");
        let g = string_to_graph(&w, &syms("ab")).unwrap();
        assert_eq!(graph_to_string(&g).unwrap(), w);
    }

    #[test]
    fn letter_outside_alphabet_is_rejected() {
        assert!(string_to_graph(&syms("abc"), &syms("ab")).is_err());
    }

    #[test]
    fn letter_at_examples() {
        let w = syms("bab");
        assert_eq!(letter_at(&w, 2).unwrap(), "a");
        assert_eq!(letter_at(&w, 1).unwrap(), "b");
        assert!(letter_at(&w, 4).is_err());
        assert!(letter_at(&w, 0).is_err());
    }

    #[test]
    fn parikh_counts_occurrences() {
        let alpha = syms("ab");
        let g = Graph::new(vec!["a".into(), "a".into(), "b".into()], vec![]).unwrap();
        assert_eq!(parikh_of_graph(&g, &alpha).unwrap().counts, vec![2, 1]);
        let empty = Graph::new(vec![], vec![]).unwrap();
        assert_eq!(parikh_of_graph(&empty, &alpha).unwrap().counts, vec![0, 0]);
        assert_eq!(parikh_of_word(&syms("abab"), &alpha).unwrap().counts, vec![2, 2]);
    }

    #[test]
    fn dgr_round_trip() {
        let alpha = syms("ab");
        let v = ParikhVector {
            alphabet: alpha.clone(),
            counts: vec![2, 0],
        };
        let g = dgr(&v);
        assert_eq!(g.node_count(), 2);
        assert_eq!(parikh_of_graph(&g, &alpha).unwrap(), v);
        let v31 = ParikhVector {
            alphabet: alpha.clone(),
            counts: vec![3, 1],
        };
        assert_eq!(parikh_of_graph(&dgr(&v31), &alpha).unwrap(), v31);
        assert_eq!(dgr(&ParikhVector::zero(&alpha)).node_count(), 0);
    }

    #[test]
    fn parikh_additive_under_disjoint_union() {
        let alpha = syms("ab");
        let g1 = dgr(&ParikhVector {
            alphabet: alpha.clone(),
            counts: vec![2, 1],
        });
        let g2 = dgr(&ParikhVector {
            alphabet: alpha.clone(),
            counts: vec![0, 3],
        });
        let u = g1.disjoint_union(&g2);
        assert_eq!(parikh_of_graph(&u, &alpha).unwrap().counts, vec![2, 4]);
    }

    #[test]
    fn tree_encoding() {
        let sig = Signature::tree(&[("f", 2), ("a", 0), ("b", 0)]);
        let ranks = sig.ranks.as_ref().unwrap();
        let t = Term::parse("f(a,b)").unwrap();
        let g = tree_to_graph(&t, ranks).unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(g.has_edge(0, "1", 1));
        assert!(g.has_edge(0, "2", 2));
        assert_eq!(graph_to_tree(&g, ranks).unwrap(), t);

        let single = Term::leaf("a");
        let g = tree_to_graph(&single, ranks).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edges().len(), 0);

        let bad = Term::parse("f(a)").unwrap();
        assert!(matches!(
            tree_to_graph(&bad, ranks),
            Err(StructureError::RankMismatch { .. })
        ));
    }

    use crate::signature::Signature;

    #[test]
    fn preorder_of_f_a_b() {
        let t = Term::parse("f(a,b)").unwrap();
        assert_eq!(t.preorder_labels(), syms("fab"));
        assert_eq!(Term::leaf("a").preorder_labels(), syms("a"));
    }

    #[test]
    fn gr_format_round_trip() {
        let g = string_to_graph(&syms("ab"), &syms("ab")).unwrap();
        let text = graph_to_gr(&g);
        let back = parse_graph_file(&text).unwrap();
        assert_eq!(back, g);
        assert!(parse_graph_file("n0 a\nn0 b\n").is_err(), "duplicate node");
        assert!(parse_graph_file("n0 a\nn0 x n9\n").is_err(), "unknown node");
    }
}
