//! Command-line interface: equivalence checking, transducer evaluation,
//! formula compilation, Parikh images, and the self-test suites.

mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use msoequiv::compiler::{compile_tree, compile_word};
use msoequiv::decider::{decide, parse_input, Budget, DomainSpec, InputValue, Verdict};
use msoequiv::formulas::parse_formula_file;
use msoequiv::parikh::{cfg_parikh, rtg_to_cfg, ContextFreeGrammar, RegularTreeGrammar};
use msoequiv::structures::{graph_to_string, graph_to_tree, string_to_graph, tree_to_graph};
use msoequiv::transducers::{evaluate, parse_transducer_file, MsoTransducer, OutputClass};

#[derive(Parser)]
#[command(
    name = "msoequiv",
    about = "Equivalence of deterministic MSO string/tree transducers on a domain language"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide equivalence of two transducers restricted to a domain.
    CheckEquiv {
        /// First transducer (.mso-t)
        t1: PathBuf,
        /// Second transducer (.mso-t)
        t2: PathBuf,
        /// Domain file: .rx (regex), .cfg, or .rtg
        domain: PathBuf,
        /// Size bound for the concrete witness search (0 disables)
        #[arg(long, default_value_t = 12)]
        witness: usize,
        /// Resource budget in automaton states; scales the other caps
        #[arg(long)]
        budget: Option<usize>,
        /// Emit the verdict as JSON
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a transducer on one input word or term.
    Run {
        /// Transducer (.mso-t)
        t: PathBuf,
        /// Input: a word (letters concatenated) or a term like f(a,b)
        input: String,
    },
    /// Compile a formula file to an automaton and print a summary.
    Compile {
        /// Formula (.mso-f)
        formula: PathBuf,
        /// Treat the signature as ranked and compile a tree automaton
        #[arg(long)]
        tree: bool,
        /// Write the automaton in .aut form to this path
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Print the Parikh image of a grammar as a semilinear set.
    Parikh {
        /// Grammar (.cfg or .rtg)
        grammar: PathBuf,
    },
    /// Run the oracle cross-check suites.
    Selftest {
        /// Seed for the sampled inputs
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

const EXIT_USAGE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::CheckEquiv {
            t1,
            t2,
            domain,
            witness,
            budget,
            json,
        } => check_equiv(&t1, &t2, &domain, witness, budget, json),
        Command::Run { t, input } => run_transducer(&t, &input),
        Command::Compile {
            formula,
            tree,
            dump,
        } => compile_formula(&formula, tree, dump.as_deref()),
        Command::Parikh { grammar } => print_parikh(&grammar),
        Command::Selftest { seed } => Ok(selftest::run(seed)),
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_transducer(path: &Path) -> Result<MsoTransducer, String> {
    parse_transducer_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_domain(path: &Path, t: &MsoTransducer) -> Result<DomainSpec, String> {
    let text = read(path)?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or_default();
    match ext {
        "cfg" => Ok(DomainSpec::Cfg(
            ContextFreeGrammar::parse(&text).map_err(|e| e.to_string())?,
        )),
        "rtg" => Ok(DomainSpec::Rtg(
            RegularTreeGrammar::parse(&text).map_err(|e| e.to_string())?,
        )),
        "rx" | "regex" => {
            let mut alphabet: Option<Vec<String>> = None;
            let mut pattern = String::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                if let Some(rest) = line.strip_prefix("alphabet:") {
                    alphabet = Some(rest.split_whitespace().map(|s| s.to_string()).collect());
                } else {
                    pattern = line.to_string();
                }
            }
            let alphabet = alphabet.unwrap_or_else(|| t.input_sig().edge_labels.clone());
            DomainSpec::regex(&pattern, &alphabet).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown domain extension `{other}`")),
    }
}

fn check_equiv(
    t1: &Path,
    t2: &Path,
    domain: &Path,
    witness: usize,
    budget_units: Option<usize>,
    json: bool,
) -> Result<ExitCode, String> {
    let m1 = load_transducer(t1)?;
    let m2 = load_transducer(t2)?;
    let d = load_domain(domain, &m1)?;
    let units = budget_units.or_else(|| {
        std::env::var("MSOEQUIV_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let mut budget = match units {
        Some(u) => Budget::with_units(u),
        None => Budget::new(),
    };
    budget.witness_bound = witness;
    budget.restart_clock();
    let verdict = decide(&m1, &m2, &d, &budget).map_err(|e| e.to_string())?;
    if json {
        println!("{}", verdict_json(&verdict));
    } else {
        println!("{verdict}");
    }
    Ok(ExitCode::from(verdict.exit_code() as u8))
}

fn verdict_json(v: &Verdict) -> serde_json::Value {
    match v {
        Verdict::Equivalent => serde_json::json!({"verdict": "equivalent"}),
        Verdict::DomainMismatch { witness } => serde_json::json!({
            "verdict": "inequivalent",
            "reason": "domain-mismatch",
            "witness": witness.as_ref().map(|w| w.to_string()),
        }),
        Verdict::OutputMismatch { a, b, n, witness } => serde_json::json!({
            "verdict": "inequivalent",
            "reason": "output-mismatch",
            "a": a,
            "b": b,
            "n": n,
            "witness": witness.as_ref().map(|w| w.to_string()),
        }),
        Verdict::ResourceExceeded { stage } => serde_json::json!({
            "verdict": "resource-exceeded",
            "stage": stage,
        }),
    }
}

fn run_transducer(path: &Path, input: &str) -> Result<ExitCode, String> {
    let m = load_transducer(path)?;
    let tree = m.input_sig().ranks.is_some();
    let value = parse_input(input, tree)?;
    let g = match &value {
        InputValue::Word(w) => {
            string_to_graph(w, &m.input_sig().edge_labels).map_err(|e| e.to_string())?
        }
        InputValue::Tree(t) => {
            let ranks = m.input_sig().ranks.as_ref().ok_or("not a tree signature")?;
            tree_to_graph(t, ranks).map_err(|e| e.to_string())?
        }
    };
    let outputs = evaluate(&m, &g).map_err(|e| e.to_string())?;
    if outputs.is_empty() {
        println!("UNDEFINED");
        return Ok(ExitCode::SUCCESS);
    }
    for h in outputs {
        match m.output_class() {
            OutputClass::StringGraph => {
                let w = graph_to_string(&h).map_err(|e| e.to_string())?;
                if w.is_empty() {
                    println!("ε");
                } else {
                    println!("{}", w.join(""));
                }
            }
            OutputClass::TreeGraph => {
                let ranks = m.output_sig().ranks.as_ref().ok_or("missing ranks")?;
                println!("{}", graph_to_tree(&h, ranks).map_err(|e| e.to_string())?);
            }
            OutputClass::DGraph => {
                println!("dgraph {}", h.sorted_labels().join(""));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn compile_formula(path: &Path, tree: bool, dump: Option<&Path>) -> Result<ExitCode, String> {
    let file = parse_formula_file(&read(path)?).map_err(|e| e.to_string())?;
    let cap = msoequiv::compiler::DEFAULT_STATE_CAP;
    if tree || file.signature.ranks.is_some() {
        let a = compile_tree(&file.formula, &file.free, &file.signature, cap)
            .map_err(|e| e.to_string())?;
        println!(
            "tree automaton: {} states, {} annotated symbols, {} transitions, {} accepting",
            a.n_states,
            a.alphabet.len(),
            a.delta.len(),
            a.accepting.iter().filter(|&&x| x).count()
        );
        if let Some(p) = dump {
            std::fs::write(p, dump_tree(&a)).map_err(|e| e.to_string())?;
        }
    } else {
        let a = compile_word(&file.formula, &file.free, &file.signature, cap)
            .map_err(|e| e.to_string())?;
        println!(
            "word automaton: {} states, {} annotated letters, {} accepting",
            a.n_states,
            a.alphabet.len(),
            a.accepting.iter().filter(|&&x| x).count()
        );
        if let Some(p) = dump {
            std::fs::write(p, dump_word(&a)).map_err(|e| e.to_string())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn letter_name(alpha: &msoequiv::compiler::BitAlphabet, l: usize) -> String {
    let base = &alpha.base[alpha.base_of(l)];
    let bits: String = (0..alpha.bits())
        .map(|b| if alpha.has_bit(l, b) { '1' } else { '0' })
        .collect();
    if bits.is_empty() {
        base.clone()
    } else {
        format!("{base}|{bits}")
    }
}

fn dump_word(a: &msoequiv::compiler::WordAutomaton) -> String {
    let mut out = String::new();
    out.push_str(&format!("states {}\nstart {}\n", a.n_states, a.start));
    for (q, acc) in a.accepting.iter().enumerate() {
        if *acc {
            out.push_str(&format!("accept {q}\n"));
        }
    }
    for q in 0..a.n_states as u32 {
        for l in 0..a.alphabet.len() {
            out.push_str(&format!(
                "trans {q} {} {}\n",
                letter_name(&a.alphabet, l),
                a.step(q, l)
            ));
        }
    }
    out
}

fn dump_tree(a: &msoequiv::compiler::TreeAutomaton) -> String {
    let mut out = String::new();
    out.push_str(&format!("states {}\ndefault {}\n", a.n_states, a.default));
    for (q, acc) in a.accepting.iter().enumerate() {
        if *acc {
            out.push_str(&format!("accept {q}\n"));
        }
    }
    let mut entries: Vec<_> = a.delta.iter().collect();
    entries.sort();
    for ((l, children), t) in entries {
        let ch: Vec<String> = children.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!(
            "trans {} ({}) {}\n",
            letter_name(&a.alphabet, *l as usize),
            ch.join(","),
            t
        ));
    }
    out
}

fn print_parikh(path: &Path) -> Result<ExitCode, String> {
    let text = read(path)?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or_default();
    let (cfg, terminals) = match ext {
        "rtg" => {
            let t = RegularTreeGrammar::parse(&text).map_err(|e| e.to_string())?;
            let g = rtg_to_cfg(&t);
            let terms = g.terminals.clone();
            (g, terms)
        }
        _ => {
            let g = ContextFreeGrammar::parse(&text).map_err(|e| e.to_string())?;
            let terms = g.terminals.clone();
            (g, terms)
        }
    };
    let s = cfg_parikh(&cfg).map_err(|e| e.to_string())?;
    println!("alphabet: {}", terminals.join(" "));
    println!("{s}");
    Ok(ExitCode::SUCCESS)
}
