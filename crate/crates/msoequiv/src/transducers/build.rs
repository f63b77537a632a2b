//! The transducer constructions used by the decision procedure: the
//! position extractor, disjoint union, marker appending, the pair
//! counter, pre-order flattening, and the domain symmetric difference.

use std::collections::BTreeMap;

use crate::error::TransducerError;
use crate::formulas::{Formula, Macro};
use crate::signature::{Signature, Symbol, HASH};
use crate::transducers::{MsoTransducer, OutputClass, TransducerTable, VAR_X, VAR_Y};

/// The string-to-dgraph position extractor for letter `a`: one copy, one
/// parameter choosing a node with an outgoing a-edge; every node up to the
/// chosen one becomes an a-labeled output node. On input w it produces
/// dgr(a^n) for each position n with w/n = a.
pub fn position_extractor(delta: &[Symbol], a: &str) -> Result<MsoTransducer, TransducerError> {
    if !delta.iter().any(|d| d == a) {
        return Err(TransducerError::SignatureMismatch(format!(
            "letter {a} not in the alphabet"
        )));
    }
    let param = "Y1".to_string();
    let dom = Formula::and(
        Formula::Apply(Macro::Singleton, vec![param.clone()]),
        Formula::exists(
            "u",
            Formula::exists(
                "v",
                Formula::and(Formula::edge(a, "u", "v"), Formula::member("u", &param)),
            ),
        ),
    );
    let psi = Formula::exists(
        "v",
        Formula::and(
            Formula::apply(Macro::Reach, &[VAR_X, "v"]),
            Formula::member("v", &param),
        ),
    );
    let delta_refs: Vec<&str> = delta.iter().map(|s| s.as_str()).collect();
    let mut node_formulas = BTreeMap::new();
    node_formulas.insert(("1".to_string(), a.to_string()), psi);
    Ok(MsoTransducer::Table(TransducerTable {
        copies: vec!["1".to_string()],
        params: vec![param],
        input_sig: Signature::string(&delta_refs),
        output_sig: Signature::dgraph(&[a]),
        dom,
        node_formulas,
        edge_formulas: BTreeMap::new(),
        kind: OutputClass::DGraph,
    }))
}

/// Disjoint union of transducers. For two tables this is the syntactic
/// construction: copies and parameters renamed apart, the conjunction of
/// the domain formulas, and all cross edge formulas false. Other shapes
/// stay a union value evaluated pairwise.
pub fn disjoint_union(
    m1: &MsoTransducer,
    m2: &MsoTransducer,
) -> Result<MsoTransducer, TransducerError> {
    if m1.input_sig() != m2.input_sig() {
        return Err(TransducerError::SignatureMismatch(
            "disjoint union needs one input signature".into(),
        ));
    }
    if let (MsoTransducer::Table(t1), MsoTransducer::Table(t2)) = (m1, m2) {
        return Ok(MsoTransducer::Table(union_tables(t1, t2)));
    }
    Ok(MsoTransducer::Union(
        Box::new(m1.clone()),
        Box::new(m2.clone()),
    ))
}

fn union_tables(t1: &TransducerTable, t2: &TransducerTable) -> TransducerTable {
    let tag = |side: usize, name: &str| format!("{side}.{name}");
    // Parameters are formula variables, so renaming them apart means
    // renaming inside every formula of the side.
    let mut map1 = BTreeMap::new();
    for p in &t1.params {
        map1.insert(p.clone(), format!("Y1_{p}"));
    }
    let mut map2 = BTreeMap::new();
    for p in &t2.params {
        map2.insert(p.clone(), format!("Y2_{p}"));
    }
    let mut params: Vec<Symbol> = map1.values().cloned().collect();
    params.extend(map2.values().cloned());

    let output_sig = merge_sigs(&t1.output_sig, &t2.output_sig);
    let mut node_formulas = BTreeMap::new();
    for ((c, s), f) in &t1.node_formulas {
        node_formulas.insert((tag(1, c), s.clone()), f.rename_free(&map1));
    }
    for ((c, s), f) in &t2.node_formulas {
        node_formulas.insert((tag(2, c), s.clone()), f.rename_free(&map2));
    }
    let mut edge_formulas = BTreeMap::new();
    for ((c, c2, gm), f) in &t1.edge_formulas {
        edge_formulas.insert((tag(1, c), tag(1, c2), gm.clone()), f.rename_free(&map1));
    }
    for ((c, c2, gm), f) in &t2.edge_formulas {
        edge_formulas.insert((tag(2, c), tag(2, c2), gm.clone()), f.rename_free(&map2));
    }
    let copies = t1
        .copies
        .iter()
        .map(|c| tag(1, c))
        .chain(t2.copies.iter().map(|c| tag(2, c)))
        .collect();
    let kind = if t1.kind == t2.kind {
        t1.kind
    } else {
        OutputClass::DGraph
    };
    TransducerTable {
        copies,
        params,
        input_sig: t1.input_sig.clone(),
        output_sig,
        dom: Formula::and(t1.dom.rename_free(&map1), t2.dom.rename_free(&map2)),
        node_formulas,
        edge_formulas,
        kind,
    }
}

fn merge_sigs(a: &Signature, b: &Signature) -> Signature {
    let mut node_labels = a.node_labels.clone();
    for l in &b.node_labels {
        if !node_labels.contains(l) {
            node_labels.push(l.clone());
        }
    }
    let mut edge_labels = a.edge_labels.clone();
    for l in &b.edge_labels {
        if !edge_labels.contains(l) {
            edge_labels.push(l.clone());
        }
    }
    Signature {
        node_labels,
        edge_labels,
        ranks: a.ranks.clone().or_else(|| b.ranks.clone()),
    }
}

/// The fixed marker-appending transducer over output alphabet `delta`:
/// copy 1 keeps the string, copy 2 keeps only the final node, and a
/// marker edge links the final node to its copy.
pub fn marker_table(delta: &[Symbol], marker: &str) -> TransducerTable {
    let delta_refs: Vec<&str> = delta.iter().map(|s| s.as_str()).collect();
    let mut out_letters = delta_refs.clone();
    out_letters.push(marker);
    let no_out = Formula::not(Formula::exists(
        "z",
        Formula::disj(delta.iter().map(|d| Formula::edge(d, VAR_X, "z"))),
    ));
    let mut node_formulas = BTreeMap::new();
    node_formulas.insert(("1".to_string(), HASH.to_string()), Formula::True);
    node_formulas.insert(("2".to_string(), HASH.to_string()), no_out.clone());
    let mut edge_formulas = BTreeMap::new();
    for d in delta {
        edge_formulas.insert(
            ("1".to_string(), "1".to_string(), d.clone()),
            Formula::edge(d, VAR_X, VAR_Y),
        );
    }
    edge_formulas.insert(
        ("1".to_string(), "2".to_string(), marker.to_string()),
        no_out,
    );
    TransducerTable {
        copies: vec!["1".to_string(), "2".to_string()],
        params: Vec::new(),
        input_sig: Signature::string(&delta_refs),
        output_sig: Signature::string(&out_letters),
        dom: Formula::True,
        node_formulas,
        edge_formulas,
        kind: OutputClass::StringGraph,
    }
}

/// Append a fresh marker to every output of a string-producing
/// transducer, as the pipeline through the fixed marker transducer.
pub fn append_marker(m: &MsoTransducer, marker: &str) -> Result<MsoTransducer, TransducerError> {
    let delta = m.output_sig().edge_labels.clone();
    if delta.iter().any(|d| d == marker) {
        return Err(TransducerError::MarkerInAlphabet(marker.to_string()));
    }
    Ok(MsoTransducer::Pipe(
        Box::new(m.clone()),
        Box::new(MsoTransducer::Table(marker_table(&delta, marker))),
    ))
}

/// The pair counter for letters a and b: the disjoint union of the two
/// position-extractor pipelines. On input g it produces dgr(a^m b^n) for
/// every pair of positions with a at position m of the first output and b
/// at position n of the second. When a or b cannot occur in the relevant
/// output alphabet the result is the empty transducer.
pub fn pair_counter(
    m1: &MsoTransducer,
    m2: &MsoTransducer,
    a: &str,
    b: &str,
) -> Result<MsoTransducer, TransducerError> {
    if a == b {
        return Err(TransducerError::PairNotDistinct(a.to_string()));
    }
    if m1.input_sig() != m2.input_sig() {
        return Err(TransducerError::SignatureMismatch(
            "pair counter needs one input signature".into(),
        ));
    }
    let d1 = m1.output_sig().edge_labels.clone();
    let d2 = m2.output_sig().edge_labels.clone();
    if !d1.iter().any(|x| x == a) || !d2.iter().any(|x| x == b) {
        // the empty transducer (no copies, false domain)
        return Ok(MsoTransducer::Table(TransducerTable {
            copies: Vec::new(),
            params: Vec::new(),
            input_sig: m1.input_sig().clone(),
            output_sig: Signature::dgraph(&[a, b]),
            dom: Formula::False,
            node_formulas: BTreeMap::new(),
            edge_formulas: BTreeMap::new(),
            kind: OutputClass::DGraph,
        }));
    }
    let left = MsoTransducer::Pipe(
        Box::new(m1.clone()),
        Box::new(position_extractor(&d1, a)?),
    );
    let right = MsoTransducer::Pipe(
        Box::new(m2.clone()),
        Box::new(position_extractor(&d2, b)?),
    );
    disjoint_union(&left, &right)
}

/// The fixed tree-to-string transducer flattening a tree to the string of
/// its node labels in pre-order: copy 1 chains the nodes in pre-order
/// (each node emitting its label as the next edge), copy 2 adds the final
/// string node, reached from the pre-order-last node.
pub fn preorder_flattener(sig: &Signature) -> Result<MsoTransducer, TransducerError> {
    if sig.ranks.is_none() {
        return Err(TransducerError::Structure(
            crate::error::StructureError::NotRanked,
        ));
    }
    let labels: Vec<&str> = sig.node_labels.iter().map(|s| s.as_str()).collect();
    let mut node_formulas = BTreeMap::new();
    node_formulas.insert(("1".to_string(), HASH.to_string()), Formula::True);
    node_formulas.insert(
        ("2".to_string(), HASH.to_string()),
        Formula::apply(Macro::Root, &[VAR_X]),
    );
    let mut edge_formulas = BTreeMap::new();
    for d in &sig.node_labels {
        edge_formulas.insert(
            ("1".to_string(), "1".to_string(), d.clone()),
            Formula::and(
                Formula::lab(d, VAR_X),
                Formula::apply(Macro::PreordSucc, &[VAR_X, VAR_Y]),
            ),
        );
        edge_formulas.insert(
            ("1".to_string(), "2".to_string(), d.clone()),
            Formula::conj([
                Formula::lab(d, VAR_X),
                Formula::apply(Macro::Root, &[VAR_Y]),
                Formula::not(Formula::exists(
                    "z",
                    Formula::apply(Macro::PreordSucc, &[VAR_X, "z"]),
                )),
            ]),
        );
    }
    Ok(MsoTransducer::Table(TransducerTable {
        copies: vec!["1".to_string(), "2".to_string()],
        params: Vec::new(),
        input_sig: sig.clone(),
        output_sig: Signature::string(&labels),
        dom: Formula::True,
        node_formulas,
        edge_formulas,
        kind: OutputClass::StringGraph,
    }))
}

/// Reduce a tree-producing transducer to a string-producing one by piping
/// through the pre-order flattener; two tree transducers are equivalent on
/// a domain exactly when their flattenings are.
pub fn flatten(m: &MsoTransducer) -> Result<MsoTransducer, TransducerError> {
    let flattener = preorder_flattener(m.output_sig())?;
    Ok(MsoTransducer::Pipe(Box::new(m.clone()), Box::new(flattener)))
}

/// The edge-stripping transducer defined exactly on the symmetric
/// difference of the two domains.
pub fn domain_symdiff(
    m1: &MsoTransducer,
    m2: &MsoTransducer,
    sigma: &[Symbol],
) -> Result<MsoTransducer, TransducerError> {
    if m1.input_sig() != m2.input_sig() {
        return Err(TransducerError::SignatureMismatch(
            "domain symmetric difference needs one input signature".into(),
        ));
    }
    let (d1, d2) = match (m1.as_table(), m2.as_table()) {
        (Some(t1), Some(t2)) => (t1.dom.clone(), t2.dom.clone()),
        _ => {
            return Err(TransducerError::SignatureMismatch(
                "domain formulas are only available on plain tables".into(),
            ))
        }
    };
    let dom = Formula::not(Formula::iff(d1, d2));
    let mut node_formulas = BTreeMap::new();
    for s in sigma {
        node_formulas.insert(("1".to_string(), s.clone()), Formula::lab(s, VAR_X));
    }
    let sigma_refs: Vec<&str> = sigma.iter().map(|s| s.as_str()).collect();
    Ok(MsoTransducer::Table(TransducerTable {
        copies: vec!["1".to_string()],
        params: Vec::new(),
        input_sig: m1.input_sig().clone(),
        output_sig: Signature::dgraph(&sigma_refs),
        dom,
        node_formulas,
        edge_formulas: BTreeMap::new(),
        kind: OutputClass::DGraph,
    }))
}
