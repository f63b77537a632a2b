//! Concrete syntax for formulas: s-expressions, one formula per file, with
//! a header declaring the signature and the free-variable context.
//!
//! ```text
//! sigma: #
//! gamma: a b
//! free: x Y1
//! (exists y (edg_a x y))
//! ```
//!
//! Variable sort follows the paper's notational convention: names starting
//! with an uppercase letter are node-set variables, all others are node
//! variables.

use crate::error::FormulaError;
use crate::formulas::ast::{Formula, Macro, Sort};
use crate::signature::Signature;

/// Free-variable context: names with sorts, in declaration order.
pub type Context = Vec<(String, Sort)>;

/// A parsed `.mso-f` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaFile {
    pub signature: Signature,
    pub free: Context,
    pub formula: Formula,
}

pub fn var_sort(name: &str) -> Sort {
    if name.chars().next().is_some_and(|c| c.is_uppercase()) {
        Sort::NodeSet
    } else {
        Sort::Node
    }
}

/// Parse a formula file: `sigma:`, `gamma:`, optional `free:`, then one
/// s-expression.
pub fn parse_formula_file(text: &str) -> Result<FormulaFile, FormulaError> {
    let mut sigma = None;
    let mut gamma = None;
    let mut free = Vec::new();
    let mut body_start = 0;
    let mut consumed = 0;
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        let advance = line.len() + 1;
        if let Some(rest) = trimmed.strip_prefix("sigma:") {
            sigma = Some(split_symbols(rest));
        } else if let Some(rest) = trimmed.strip_prefix("gamma:") {
            gamma = Some(split_symbols(rest));
        } else if let Some(rest) = trimmed.strip_prefix("free:") {
            free = split_symbols(rest)
                .into_iter()
                .map(|v| {
                    let s = var_sort(&v);
                    (v, s)
                })
                .collect();
        } else if trimmed.is_empty() || trimmed.starts_with(';') {
            // skip blanks and comments
        } else {
            body_start = consumed;
            let _ = lineno;
            break;
        }
        consumed += advance;
        body_start = consumed;
    }
    let sigma = sigma.ok_or_else(|| err_at(1, 1, "missing `sigma:` header"))?;
    let gamma = gamma.ok_or_else(|| err_at(1, 1, "missing `gamma:` header"))?;
    let sig = Signature::new(sigma, gamma);
    let body = &text[body_start.min(text.len())..];
    let formula = parse_formula(body, &sig, &free)?;
    Ok(FormulaFile {
        signature: sig,
        free,
        formula,
    })
}

fn split_symbols(s: &str) -> Vec<String> {
    s.split_whitespace().map(|t| t.to_string()).collect()
}

fn err_at(line: usize, col: usize, msg: impl Into<String>) -> FormulaError {
    FormulaError::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parse one s-expression over the given signature and free context.
///
/// Macros are accepted and stored unexpanded. Every free variable of the
/// result must be declared in `ctx` with the right sort.
pub fn parse_formula(text: &str, sig: &Signature, ctx: &Context) -> Result<Formula, FormulaError> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let f = parse_expr(&tokens, &mut pos, sig)?;
    if pos != tokens.len() {
        let t = &tokens[pos];
        return Err(err_at(t.line, t.col, format!("trailing input `{}`", t.text)));
    }
    // Sort discipline inside the formula follows from the case convention;
    // what remains is that free variables are declared.
    let free = f.free_vars();
    for (name, sort) in &free {
        match ctx.iter().find(|(n, _)| n == name) {
            None => return Err(FormulaError::Unbound(name.clone())),
            Some((_, declared)) if declared != sort => {
                return Err(FormulaError::SortMismatch(
                    name.clone(),
                    sort.to_string(),
                    declared.to_string(),
                ))
            }
            _ => {}
        }
    }
    Ok(f)
}

#[derive(Debug)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, FormulaError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut cur = String::new();
    let mut cur_start = (1, 1);
    let flush = |cur: &mut String, out: &mut Vec<Token>, start: (usize, usize)| {
        if !cur.is_empty() {
            out.push(Token {
                text: std::mem::take(cur),
                line: start.0,
                col: start.1,
            });
        }
    };
    let mut in_comment = false;
    for c in text.chars() {
        if in_comment {
            if c == '\n' {
                in_comment = false;
            }
        } else {
            match c {
                ';' => {
                    flush(&mut cur, &mut out, cur_start);
                    in_comment = true;
                }
                '(' | ')' => {
                    flush(&mut cur, &mut out, cur_start);
                    out.push(Token {
                        text: c.to_string(),
                        line,
                        col,
                    });
                }
                c if c.is_whitespace() => flush(&mut cur, &mut out, cur_start),
                _ => {
                    if cur.is_empty() {
                        cur_start = (line, col);
                    }
                    cur.push(c);
                }
            }
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    flush(&mut cur, &mut out, cur_start);
    Ok(out)
}

fn expect_var(tokens: &[Token], pos: &mut usize, sort: Sort) -> Result<String, FormulaError> {
    let t = tokens
        .get(*pos)
        .ok_or_else(|| err_at(0, 0, "unexpected end of input, expected a variable"))?;
    if t.text == "(" || t.text == ")" {
        return Err(err_at(t.line, t.col, format!("expected a variable, got `{}`", t.text)));
    }
    let found = var_sort(&t.text);
    if found != sort {
        return Err(FormulaError::SortMismatch(
            t.text.clone(),
            sort.to_string(),
            found.to_string(),
        ));
    }
    *pos += 1;
    Ok(t.text.clone())
}

fn parse_expr(tokens: &[Token], pos: &mut usize, sig: &Signature) -> Result<Formula, FormulaError> {
    let t = tokens
        .get(*pos)
        .ok_or_else(|| err_at(0, 0, "unexpected end of input"))?;
    match t.text.as_str() {
        "true" => {
            *pos += 1;
            Ok(Formula::True)
        }
        "false" => {
            *pos += 1;
            Ok(Formula::False)
        }
        "(" => {
            *pos += 1;
            let head = tokens
                .get(*pos)
                .ok_or_else(|| err_at(t.line, t.col, "unclosed `(`"))?;
            let head_text = head.text.clone();
            let (hline, hcol) = (head.line, head.col);
            *pos += 1;
            let f = parse_head(&head_text, hline, hcol, tokens, pos, sig)?;
            let close = tokens
                .get(*pos)
                .ok_or_else(|| err_at(hline, hcol, "missing `)`"))?;
            if close.text != ")" {
                return Err(err_at(close.line, close.col, format!("expected `)`, got `{}`", close.text)));
            }
            *pos += 1;
            Ok(f)
        }
        other => Err(err_at(t.line, t.col, format!("unexpected token `{other}`"))),
    }
}

fn parse_head(
    head: &str,
    line: usize,
    col: usize,
    tokens: &[Token],
    pos: &mut usize,
    sig: &Signature,
) -> Result<Formula, FormulaError> {
    match head {
        "not" => Ok(Formula::not(parse_expr(tokens, pos, sig)?)),
        "and" | "or" => {
            let mut parts = Vec::new();
            while tokens.get(*pos).map(|t| t.text.as_str()) != Some(")") {
                parts.push(parse_expr(tokens, pos, sig)?);
            }
            if parts.is_empty() {
                return Err(err_at(line, col, format!("`{head}` needs at least one argument")));
            }
            Ok(if head == "and" {
                Formula::conj(parts)
            } else {
                Formula::disj(parts)
            })
        }
        "implies" | "->" => {
            let a = parse_expr(tokens, pos, sig)?;
            let b = parse_expr(tokens, pos, sig)?;
            Ok(Formula::implies(a, b))
        }
        "iff" | "<->" => {
            let a = parse_expr(tokens, pos, sig)?;
            let b = parse_expr(tokens, pos, sig)?;
            Ok(Formula::iff(a, b))
        }
        "exists" | "forall" => {
            let vt = tokens
                .get(*pos)
                .ok_or_else(|| err_at(line, col, "missing quantified variable"))?;
            let name = vt.text.clone();
            *pos += 1;
            let sort = var_sort(&name);
            let body = parse_expr(tokens, pos, sig)?;
            Ok(if head == "exists" {
                Formula::Exists(sort, name, Box::new(body))
            } else {
                Formula::Forall(sort, name, Box::new(body))
            })
        }
        "in" => {
            let x = expect_var(tokens, pos, Sort::Node)?;
            let set = expect_var(tokens, pos, Sort::NodeSet)?;
            Ok(Formula::In(x, set))
        }
        "=" => {
            let x = expect_var(tokens, pos, Sort::Node)?;
            let y = expect_var(tokens, pos, Sort::Node)?;
            Ok(Formula::Eq(x, y))
        }
        "singleton" => {
            let s = expect_var(tokens, pos, Sort::NodeSet)?;
            Ok(Formula::Apply(Macro::Singleton, vec![s]))
        }
        "reach" => {
            let x = expect_var(tokens, pos, Sort::Node)?;
            let y = expect_var(tokens, pos, Sort::Node)?;
            Ok(Formula::Apply(Macro::Reach, vec![x, y]))
        }
        "root" => {
            let x = expect_var(tokens, pos, Sort::Node)?;
            Ok(Formula::Apply(Macro::Root, vec![x]))
        }
        "preord" => {
            let x = expect_var(tokens, pos, Sort::Node)?;
            let y = expect_var(tokens, pos, Sort::Node)?;
            Ok(Formula::Apply(Macro::PreordSucc, vec![x, y]))
        }
        _ => {
            if let Some(sigma) = head.strip_prefix("lab_") {
                if !sig.has_node_label(sigma) {
                    return Err(FormulaError::UnknownNodeLabel(sigma.to_string()));
                }
                let x = expect_var(tokens, pos, Sort::Node)?;
                Ok(Formula::Lab(sigma.to_string(), x))
            } else if let Some(gamma) = head.strip_prefix("edg_") {
                if !sig.has_edge_label(gamma) {
                    return Err(FormulaError::UnknownEdgeLabel(gamma.to_string()));
                }
                let x = expect_var(tokens, pos, Sort::Node)?;
                let y = expect_var(tokens, pos, Sort::Node)?;
                Ok(Formula::Edge(gamma.to_string(), x, y))
            } else {
                Err(err_at(line, col, format!("unknown operator `{head}`")))
            }
        }
    }
}
