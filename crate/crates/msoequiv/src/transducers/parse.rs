//! The `.mso-t` transducer file format.
//!
//! ```text
//! copies: 1 2
//! params: Y1
//! input-sigma: #
//! input-gamma: a b
//! output-sigma: #
//! output-gamma: a b
//! kind: string
//! dom: true
//! node 1 #: true
//! edge 1 1 a: (edg_a x y)
//! ```
//!
//! `input-rank:`/`output-rank:` lines (`f=2 a=0`) turn a signature into a
//! ranked one; `kind:` is one of string, tree, dgraph. Omitted formulas
//! default to false. Formulas use the `.mso-f` expression syntax with the
//! distinguished variables x and y.

use std::collections::BTreeMap;

use crate::error::TransducerError;
use crate::formulas::{parse_formula, Context, Sort};
use crate::signature::Signature;
use crate::transducers::{MsoTransducer, OutputClass, TransducerTable, VAR_X, VAR_Y};

pub fn parse_transducer_file(text: &str) -> Result<MsoTransducer, TransducerError> {
    let err = |msg: String| TransducerError::Parse(msg);
    let mut copies: Option<Vec<String>> = None;
    let mut params: Vec<String> = Vec::new();
    let mut input_sigma = None;
    let mut input_gamma = None;
    let mut output_sigma = None;
    let mut output_gamma = None;
    let mut input_rank: Option<Vec<(String, usize)>> = None;
    let mut output_rank: Option<Vec<(String, usize)>> = None;
    let mut kind: Option<OutputClass> = None;
    // (header words, formula text) blocks
    let mut blocks: Vec<(Vec<String>, String)> = Vec::new();
    let mut current: Option<(Vec<String>, String)> = None;

    let header_words = |line: &str| -> Option<Vec<String>> {
        let (head, _) = line.split_once(':')?;
        let words: Vec<String> = head.split_whitespace().map(|w| w.to_string()).collect();
        match words.first().map(|w| w.as_str()) {
            Some("dom") if words.len() == 1 => Some(words),
            Some("node") if words.len() == 3 => Some(words),
            Some("edge") if words.len() == 4 => Some(words),
            _ => None,
        }
    };

    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') && !trimmed.contains(':') {
            continue;
        }
        let simple = |rest: &str| -> Vec<String> {
            rest.split_whitespace().map(|w| w.to_string()).collect()
        };
        if let Some(rest) = trimmed.strip_prefix("copies:") {
            copies = Some(simple(rest));
        } else if let Some(rest) = trimmed.strip_prefix("params:") {
            params = simple(rest);
        } else if let Some(rest) = trimmed.strip_prefix("input-sigma:") {
            input_sigma = Some(simple(rest));
        } else if let Some(rest) = trimmed.strip_prefix("input-gamma:") {
            input_gamma = Some(simple(rest));
        } else if let Some(rest) = trimmed.strip_prefix("output-sigma:") {
            output_sigma = Some(simple(rest));
        } else if let Some(rest) = trimmed.strip_prefix("output-gamma:") {
            output_gamma = Some(simple(rest));
        } else if let Some(rest) = trimmed.strip_prefix("input-rank:") {
            input_rank = Some(parse_ranks(rest)?);
        } else if let Some(rest) = trimmed.strip_prefix("output-rank:") {
            output_rank = Some(parse_ranks(rest)?);
        } else if let Some(rest) = trimmed.strip_prefix("kind:") {
            kind = Some(match rest.trim() {
                "string" => OutputClass::StringGraph,
                "tree" => OutputClass::TreeGraph,
                "dgraph" => OutputClass::DGraph,
                other => return Err(err(format!("unknown kind `{other}`"))),
            });
        } else if let Some(words) = header_words(trimmed) {
            if let Some(done) = current.take() {
                blocks.push(done);
            }
            let body = trimmed.split_once(':').unwrap().1.trim().to_string();
            current = Some((words, body));
        } else if let Some((_, body)) = current.as_mut() {
            body.push(' ');
            body.push_str(trimmed);
        } else {
            return Err(err(format!("unexpected line `{trimmed}`")));
        }
    }
    if let Some(done) = current.take() {
        blocks.push(done);
    }

    let copies = copies.ok_or_else(|| err("missing `copies:`".into()))?;
    let mut input_sig = Signature::new(
        input_sigma.ok_or_else(|| err("missing `input-sigma:`".into()))?,
        input_gamma.ok_or_else(|| err("missing `input-gamma:`".into()))?,
    );
    if let Some(ranks) = input_rank {
        input_sig.ranks = Some(ranks.into_iter().collect());
    }
    let mut output_sig = Signature::new(
        output_sigma.ok_or_else(|| err("missing `output-sigma:`".into()))?,
        output_gamma.ok_or_else(|| err("missing `output-gamma:`".into()))?,
    );
    if let Some(ranks) = output_rank {
        output_sig.ranks = Some(ranks.into_iter().collect());
    }
    let kind = kind.unwrap_or(if output_sig.ranks.is_some() {
        OutputClass::TreeGraph
    } else if output_sig.edge_labels.is_empty() {
        OutputClass::DGraph
    } else {
        OutputClass::StringGraph
    });

    let param_ctx: Context = params.iter().map(|p| (p.clone(), Sort::NodeSet)).collect();
    let mut dom = None;
    let mut node_formulas = BTreeMap::new();
    let mut edge_formulas = BTreeMap::new();
    for (words, body) in blocks {
        match words[0].as_str() {
            "dom" => {
                let f = parse_formula(&body, &input_sig, &param_ctx)
                    .map_err(TransducerError::Formula)?;
                dom = Some(f);
            }
            "node" => {
                let copy = words[1].clone();
                let sigma = words[2].clone();
                if !copies.contains(&copy) {
                    return Err(err(format!("unknown copy `{copy}`")));
                }
                if !output_sig.has_node_label(&sigma) {
                    return Err(err(format!("unknown output label `{sigma}`")));
                }
                let mut ctx = param_ctx.clone();
                ctx.push((VAR_X.to_string(), Sort::Node));
                let f =
                    parse_formula(&body, &input_sig, &ctx).map_err(TransducerError::Formula)?;
                node_formulas.insert((copy, sigma), f);
            }
            "edge" => {
                let c1 = words[1].clone();
                let c2 = words[2].clone();
                let gamma = words[3].clone();
                if !copies.contains(&c1) || !copies.contains(&c2) {
                    return Err(err(format!("unknown copy in `edge {c1} {c2}`")));
                }
                if !output_sig.has_edge_label(&gamma) {
                    return Err(err(format!("unknown output edge label `{gamma}`")));
                }
                let mut ctx = param_ctx.clone();
                ctx.push((VAR_X.to_string(), Sort::Node));
                ctx.push((VAR_Y.to_string(), Sort::Node));
                let f =
                    parse_formula(&body, &input_sig, &ctx).map_err(TransducerError::Formula)?;
                edge_formulas.insert((c1, c2, gamma), f);
            }
            _ => unreachable!(),
        }
    }
    Ok(MsoTransducer::Table(TransducerTable {
        copies,
        params,
        input_sig,
        output_sig,
        dom: dom.ok_or_else(|| err("missing `dom:` block".into()))?,
        node_formulas,
        edge_formulas,
        kind,
    }))
}

fn parse_ranks(rest: &str) -> Result<Vec<(String, usize)>, TransducerError> {
    rest.split_whitespace()
        .map(|item| {
            let (sym, rank) = item.split_once('=').ok_or_else(|| {
                TransducerError::Parse(format!("rank entries look like f=2, got `{item}`"))
            })?;
            let r: usize = rank
                .parse()
                .map_err(|_| TransducerError::Parse(format!("bad rank in `{item}`")))?;
            Ok((sym.to_string(), r))
        })
        .collect()
}
