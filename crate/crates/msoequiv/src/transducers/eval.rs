//! Evaluation semantics of MSO transducers.
//!
//! For each parameter valuation satisfying the domain formula, the output
//! graph has a node (c,u) whenever exactly one output label's node formula
//! holds at u, and an edge per edge formula. Formulas are evaluated
//! through the automaton compiler when the input is a string or tree
//! graph, with the direct model checker as the fallback (and as the
//! cross-check oracle in tests). Nondeterministic evaluation enumerates
//! parameter valuations and is capped; production counting runs go
//! through the decider's symbolic construction instead.

use std::collections::{BTreeMap, BTreeSet};

use crate::compiler::{self, TreeAutomaton, WordAutomaton, DEFAULT_STATE_CAP};
use crate::error::TransducerError;
use crate::formulas::{check_with_cap, Assignment, Context, Formula, Sort};
use crate::signature::Symbol;
use crate::structures::{graph_to_string, graph_to_tree, Graph, NodeId, Term};
use crate::transducers::{MsoTransducer, OutputClass, TransducerTable, VAR_X, VAR_Y};

/// Node cap for parameter-valuation enumeration.
pub const PARAM_EVAL_CAP: usize = 16;

/// Evaluation result plus warnings from the exactly-one-label check.
#[derive(Debug, Clone, Default)]
pub struct Evaluated {
    pub outputs: Vec<Graph>,
    pub warnings: Vec<String>,
}

/// All outputs of the transducer on the input graph. Deterministic
/// transducers yield zero or one output.
pub fn evaluate(m: &MsoTransducer, g: &Graph) -> Result<Vec<Graph>, TransducerError> {
    Ok(evaluate_detailed(m, g)?.outputs)
}

pub fn evaluate_detailed(m: &MsoTransducer, g: &Graph) -> Result<Evaluated, TransducerError> {
    match m {
        MsoTransducer::Table(t) => evaluate_table(t, g),
        MsoTransducer::Pipe(a, b) => {
            let first = evaluate_detailed(a, g)?;
            let mut out = Evaluated {
                outputs: Vec::new(),
                warnings: first.warnings,
            };
            for h in &first.outputs {
                let second = evaluate_detailed(b, h)?;
                out.outputs.extend(second.outputs);
                out.warnings.extend(second.warnings);
            }
            dedupe(&mut out.outputs);
            Ok(out)
        }
        MsoTransducer::Union(a, b) => {
            let left = evaluate_detailed(a, g)?;
            let right = evaluate_detailed(b, g)?;
            let mut out = Evaluated {
                outputs: Vec::new(),
                warnings: left.warnings,
            };
            out.warnings.extend(right.warnings);
            for h1 in &left.outputs {
                for h2 in &right.outputs {
                    out.outputs.push(h1.disjoint_union(h2));
                }
            }
            dedupe(&mut out.outputs);
            Ok(out)
        }
    }
}

/// Composition at evaluation level: all outputs of m2 over outputs of m1.
pub fn pipe_evaluate(
    m1: &MsoTransducer,
    m2: &MsoTransducer,
    g: &Graph,
) -> Result<Vec<Graph>, TransducerError> {
    if m1.output_sig() != m2.input_sig() {
        return Err(TransducerError::SignatureMismatch(format!(
            "pipe: output signature ({}) differs from input signature ({})",
            m1.output_sig(),
            m2.input_sig()
        )));
    }
    let mut out = Vec::new();
    for h in evaluate(m1, g)? {
        out.extend(evaluate(m2, &h)?);
    }
    dedupe(&mut out);
    Ok(out)
}

/// Outputs are compared up to the isomorphism their class admits: words
/// for string graphs, terms for trees, label multisets for dgraphs.
fn dedupe(outputs: &mut Vec<Graph>) {
    let mut seen: BTreeSet<Vec<Symbol>> = BTreeSet::new();
    let mut kept = Vec::with_capacity(outputs.len());
    for g in outputs.drain(..) {
        let key = canonical_key(&g);
        if seen.insert(key) {
            kept.push(g);
        }
    }
    *outputs = kept;
}

fn canonical_key(g: &Graph) -> Vec<Symbol> {
    if g.edges().is_empty() {
        let mut k = vec!["dg".to_string()];
        k.extend(g.sorted_labels());
        return k;
    }
    if let Ok(w) = graph_to_string(g) {
        let mut k = vec!["w".to_string()];
        k.extend(w);
        return k;
    }
    // Fall back to a structural dump.
    let mut k = vec!["g".to_string()];
    for v in g.nodes() {
        k.push(format!("{}:{}", v, g.label(v)));
    }
    for (s, l, t) in g.edges() {
        k.push(format!("{s}-{l}-{t}"));
    }
    k
}

/// How formulas get evaluated on this input.
enum FormulaEval {
    Word {
        word: Vec<Symbol>,
        cache: BTreeMap<(Context, String), WordAutomaton>,
    },
    Tree {
        term: Term,
        cache: BTreeMap<(Context, String), TreeAutomaton>,
    },
    Direct,
}

impl FormulaEval {
    fn new(t: &TransducerTable, g: &Graph) -> FormulaEval {
        if t.input_sig.ranks.is_some() {
            if let Some(ranks) = t.input_sig.ranks.as_ref() {
                if let Ok(term) = graph_to_tree(g, ranks) {
                    return FormulaEval::Tree {
                        term,
                        cache: BTreeMap::new(),
                    };
                }
            }
        } else if let Ok(word) = graph_to_string(g) {
            return FormulaEval::Word {
                word,
                cache: BTreeMap::new(),
            };
        }
        FormulaEval::Direct
    }

    fn holds(
        &mut self,
        t: &TransducerTable,
        f: &Formula,
        ctx: &Context,
        g: &Graph,
        a: &Assignment,
    ) -> Result<bool, TransducerError> {
        match self {
            FormulaEval::Word { word, cache } => {
                let key = (ctx.clone(), f.to_string());
                if !cache.contains_key(&key) {
                    let auto = compiler::compile_word(f, ctx, &t.input_sig, DEFAULT_STATE_CAP)?;
                    cache.insert(key.clone(), auto);
                }
                Ok(compiler::word_accepts(&cache[&key], word, a)?)
            }
            FormulaEval::Tree { term, cache } => {
                let key = (ctx.clone(), f.to_string());
                if !cache.contains_key(&key) {
                    let auto = compiler::compile_tree(f, ctx, &t.input_sig, DEFAULT_STATE_CAP)?;
                    cache.insert(key.clone(), auto);
                }
                Ok(compiler::tree_accepts(&cache[&key], term, a)?)
            }
            FormulaEval::Direct => Ok(check_with_cap(f, g, a, PARAM_EVAL_CAP)?),
        }
    }
}

fn evaluate_table(t: &TransducerTable, g: &Graph) -> Result<Evaluated, TransducerError> {
    for v in g.nodes() {
        if !t.input_sig.has_node_label(g.label(v)) {
            return Err(TransducerError::SignatureMismatch(format!(
                "node label {}",
                g.label(v)
            )));
        }
    }
    for (_, l, _) in g.edges() {
        if !t.input_sig.has_edge_label(l) {
            return Err(TransducerError::SignatureMismatch(format!("edge label {l}")));
        }
    }
    let mut eval = FormulaEval::new(t, g);
    let n = g.node_count();
    if !t.params.is_empty() && n > PARAM_EVAL_CAP {
        return Err(TransducerError::ParameterCapExceeded(n, PARAM_EVAL_CAP));
    }
    let param_ctx: Context = t.params.iter().map(|p| (p.clone(), Sort::NodeSet)).collect();
    let mut out = Evaluated::default();
    let mut valuation_sets = vec![BTreeSet::new(); t.params.len()];
    enumerate_valuations(t, g, &mut eval, &param_ctx, 0, &mut valuation_sets, &mut out)?;
    dedupe(&mut out.outputs);
    Ok(out)
}

fn enumerate_valuations(
    t: &TransducerTable,
    g: &Graph,
    eval: &mut FormulaEval,
    param_ctx: &Context,
    idx: usize,
    chosen: &mut Vec<BTreeSet<NodeId>>,
    out: &mut Evaluated,
) -> Result<(), TransducerError> {
    if idx == t.params.len() {
        let mut assignment = Assignment::new();
        for (p, s) in t.params.iter().zip(chosen.iter()) {
            assignment = assignment.set(p, s.iter().copied());
        }
        if eval.holds(t, &t.dom, param_ctx, g, &assignment)? {
            let h = build_output(t, g, eval, param_ctx, &assignment, out)?;
            validate_output(t, &h)?;
            out.outputs.push(h);
        }
        return Ok(());
    }
    let n = g.node_count();
    for mask in 0u64..(1u64 << n) {
        chosen[idx] = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        enumerate_valuations(t, g, eval, param_ctx, idx + 1, chosen, out)?;
    }
    Ok(())
}

fn build_output(
    t: &TransducerTable,
    g: &Graph,
    eval: &mut FormulaEval,
    param_ctx: &Context,
    params: &Assignment,
    out: &mut Evaluated,
) -> Result<Graph, TransducerError> {
    let mut node_ctx = param_ctx.clone();
    node_ctx.push((VAR_X.to_string(), Sort::Node));
    node_ctx.sort();
    let mut edge_ctx = node_ctx.clone();
    edge_ctx.push((VAR_Y.to_string(), Sort::Node));
    edge_ctx.sort();

    // Nodes: (c,u) exists when exactly one output label's formula holds.
    let mut ids: BTreeMap<(Symbol, NodeId), usize> = BTreeMap::new();
    let mut labels: Vec<Symbol> = Vec::new();
    for c in &t.copies {
        for u in g.nodes() {
            let mut found: Vec<&Symbol> = Vec::new();
            for sigma in &t.output_sig.node_labels {
                let f = t.node_formula(c, sigma);
                if matches!(f, Formula::False) {
                    continue;
                }
                let a = params.clone().node(VAR_X, u);
                if eval.holds(t, f, &node_ctx, g, &a)? {
                    found.push(sigma);
                }
            }
            match found.len() {
                0 => {}
                1 => {
                    ids.insert((c.clone(), u), labels.len());
                    labels.push(found[0].clone());
                }
                k => out.warnings.push(format!(
                    "node ({c},{u}) dropped: {k} output labels apply"
                )),
            }
        }
    }
    // Edges per edge formula over existing nodes.
    let mut edges = Vec::new();
    for ((c, c2, gamma), f) in &t.edge_formulas {
        if matches!(f, Formula::False) {
            continue;
        }
        for u in g.nodes() {
            let su = match ids.get(&(c.clone(), u)) {
                Some(&i) => i,
                None => continue,
            };
            for v in g.nodes() {
                let tv = match ids.get(&(c2.clone(), v)) {
                    Some(&i) => i,
                    None => continue,
                };
                let a = params.clone().node(VAR_X, u).node(VAR_Y, v);
                if eval.holds(t, f, &edge_ctx, g, &a)? {
                    edges.push((su, gamma.clone(), tv));
                }
            }
        }
    }
    Ok(Graph::new(labels, edges).expect("ids in range"))
}

fn validate_output(t: &TransducerTable, h: &Graph) -> Result<(), TransducerError> {
    let r = match t.kind {
        OutputClass::StringGraph => h.validate_string_graph(),
        OutputClass::TreeGraph => match &t.output_sig.ranks {
            Some(ranks) => h.validate_tree_graph(ranks),
            None => Err(crate::error::StructureError::NotRanked),
        },
        OutputClass::DGraph => h.validate_dgraph(),
    };
    r.map_err(|e| TransducerError::InvalidOutput(t.kind.name().to_string(), e.to_string()))
}
