use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::Path;
use std::time::Duration;

use coxroot_core::document::GraphDocument;
use coxroot_core::game::{finite_group_test, play, FiniteTest, Outcome, Strategy};
use coxroot_core::geom::{GroupWord, ScalarAction, Sign};
use coxroot_core::report::{bond_json, one_based, strings, Analysis, SMultReport};
use coxroot_core::roots::{dominance_test, enumerate_roots, Dominance, Limits, RootsError};
use coxroot_core::{BondOrder, EgcmGraph, Scalar};
use serde_json::{json, Value};

use crate::{Command, StrategyArg, Word};

pub struct Output {
    pub text: String,
    pub json: Value,
}

#[derive(Debug)]
pub struct Failure {
    pub code: String,
    pub detail: String,
}

impl Failure {
    fn new(code: &str, detail: impl ToString) -> Self {
        Failure {
            code: code.to_string(),
            detail: detail.to_string(),
        }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::new(e.code(), &e)
            }
        })*
    };
}

failure_from!(
    coxroot_core::document::DocumentError,
    coxroot_core::GraphError,
    coxroot_core::geom::GeomError,
    coxroot_core::game::GameError,
    RootsError
);

type CmdResult = Result<Output, Failure>;

fn load(path: &Path) -> Result<EgcmGraph, Failure> {
    Ok(GraphDocument::load(path)?.build()?)
}

/// 0-based letters in application order, checked against the graph.
fn letters(g: &EgcmGraph, w: &Word) -> Result<Vec<usize>, Failure> {
    w.0.iter()
        .map(|&k| {
            if k <= g.n() {
                Ok(k - 1)
            } else {
                Err(Failure::new("NodeOutOfRange", format!("node {k} is not in 1..={}", g.n())))
            }
        })
        .collect()
}

fn node(g: &EgcmGraph, k: usize) -> Result<usize, Failure> {
    if (1..=g.n()).contains(&k) {
        Ok(k - 1)
    } else {
        Err(Failure::new("NodeOutOfRange", format!("node {k} is not in 1..={}", g.n())))
    }
}

fn vector(g: &EgcmGraph, text: &str) -> Result<Vec<Scalar>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    Ok(g.parse_position(&parts)?)
}

/// `s1 s2 s1` in application order, or `e`.
fn render_word(app_order: &[usize]) -> String {
    if app_order.is_empty() {
        return "e".into();
    }
    app_order.iter().map(|k| format!("s{}", k + 1)).collect::<Vec<_>>().join(" ")
}

fn render_vec(v: &[Scalar]) -> String {
    format!("({})", strings(v).join(", "))
}

fn bond_text(b: BondOrder) -> String {
    b.to_string()
}

pub fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Validate(a) => validate(&load(&a.graph)?),
        Command::Classify(a) => classify(&load(&a.graph)?),
        Command::Roots { graph, max_length, max_count } => roots(&load(&graph.graph)?, Limits { max_length, max_count }),
        Command::Smult { graph, node: x } => {
            let g = load(&graph.graph)?;
            smult(&g, node(&g, x)?)
        }
        Command::Inversions { graph, word } => {
            let g = load(&graph.graph)?;
            let w = letters(&g, &word)?;
            inversions(&g, &w)
        }
        Command::Reduce { graph, word } => {
            let g = load(&graph.graph)?;
            let w = letters(&g, &word)?;
            reduce(&g, &w)
        }
        Command::Factor { graph, word, node: x } => {
            let g = load(&graph.graph)?;
            let w = letters(&g, &word)?;
            factor(&g, &w, node(&g, x)?)
        }
        Command::Dominance { graph, alpha, beta, bound } => {
            let g = load(&graph.graph)?;
            let (a, b) = (vector(&g, &alpha)?, vector(&g, &beta)?);
            dominance(&g, &a, &b, bound)
        }
        Command::Game { graph, position, strategy, seed, max_steps, moves } => {
            let g = load(&graph.graph)?;
            let pos = vector(&g, &position)?;
            let strategy = match (moves, strategy) {
                (Some(m), _) => Strategy::UserSequence { moves: letters(&g, &m)? },
                (None, StrategyArg::FirstLegal) => Strategy::FirstLegal,
                (None, StrategyArg::Random) => Strategy::Random { seed },
            };
            game(&g, &pos, &strategy, max_steps)
        }
        Command::Finite { graph, max_steps } => finite(&load(&graph.graph)?, max_steps),
        Command::Serve { port, host, max_sessions, idle_minutes } => serve(&host, port, max_sessions, idle_minutes),
    }
}

fn validate(g: &EgcmGraph) -> CmdResult {
    let edges = g.edges();
    let mut text = format!(
        "valid: {} nodes, {} mode, tolerance {:e}\n",
        g.n(),
        if g.is_exact() { "exact" } else { "float" },
        g.tol().eps()
    );
    for e in &edges {
        writeln!(text, "  {}-{}: m={} p={} q={}", e.i + 1, e.j + 1, bond_text(e.bond), e.p, e.q).unwrap();
    }
    let json = json!({
        "valid": true,
        "n": g.n(),
        "labels": g.labels(),
        "mode": g.mode(),
        "tolerance": g.tol().eps(),
        "edges": edges.iter().map(|e| json!({
            "i": e.i + 1,
            "j": e.j + 1,
            "p": e.p.to_string(),
            "q": e.q.to_string(),
            "m": bond_json(e.bond),
        })).collect::<Vec<_>>(),
    });
    Ok(Output { text, json })
}

fn classify(g: &EgcmGraph) -> CmdResult {
    let a = Analysis::of(g);
    let mut text = String::new();
    match (&a.matrix_type, &a.type_error) {
        (Some(t), _) => writeln!(text, "type: {t}").unwrap(),
        (None, Some(code)) => writeln!(text, "type: undefined ({code})").unwrap(),
        (None, None) => unreachable!("classification yields a type or an error"),
    }
    writeln!(text, "bonds:").unwrap();
    for e in g.edges() {
        writeln!(text, "  {}-{}: m={} (p={}, q={})", e.i + 1, e.j + 1, bond_text(e.bond), e.p, e.q).unwrap();
    }
    writeln!(text, "ON-components:").unwrap();
    for (c, comp) in a.components.iter().enumerate() {
        let nodes = comp.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        let f = a.f_values[c].map_or("undefined".to_string(), |f| f.to_string());
        let unital = if a.unital[c] { "unital" } else { "not unital" };
        writeln!(text, "  {{{nodes}}}: {unital}, f={f}").unwrap();
    }
    if a.odd_asymmetries.is_empty() {
        writeln!(text, "odd asymmetries: none").unwrap();
    } else {
        let pairs: Vec<String> = a.odd_asymmetries.iter().map(|[i, j]| format!("{i}-{j}")).collect();
        writeln!(text, "odd asymmetries: {}", pairs.join(", ")).unwrap();
    }
    let json = serde_json::to_value(&a).expect("serializable");
    Ok(Output { text, json })
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "positive",
        Sign::Negative => "negative",
        Sign::Zero => "zero",
        Sign::Mixed => "mixed",
    }
}

fn roots(g: &EgcmGraph, limits: Limits) -> CmdResult {
    let set = match enumerate_roots(g, limits) {
        Ok(set) => set,
        Err(RootsError::LimitExceeded { max_count, partial }) => {
            return Err(Failure::new(
                "LimitExceeded",
                format!(
                    "more than {max_count} roots (found {} up to length {}); W is probably infinite",
                    partial.len(),
                    partial.depth()
                ),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let status = if set.is_exhausted() {
        format!("exhausted at length {}", set.depth())
    } else {
        format!("not exhausted; searched to length {}", set.depth())
    };
    let mut text = format!("{} roots, {} positive, {status}\n", set.len(), set.positive_count());
    for r in set.records() {
        let origin = r.witness.origin;
        writeln!(
            text,
            "  {}  from alpha_{} by {}",
            render_vec(&r.coeffs),
            origin + 1,
            render_word(&r.witness.word.application_order())
        )
        .unwrap();
    }
    let json = json!({
        "count": set.len(),
        "positive_count": set.positive_count(),
        "exhausted": set.is_exhausted(),
        "depth": set.depth(),
        "roots": set.records().iter().map(|r| json!({
            "coeffs": strings(&r.coeffs),
            "sign": sign_name(r.sign),
            "word": one_based(&r.witness.word.application_order()),
            "origin": r.witness.origin + 1,
        })).collect::<Vec<_>>(),
    });
    Ok(Output { text, json })
}

fn smult(g: &EgcmGraph, x: usize) -> CmdResult {
    let s = g.s_mult(x)?;
    let report = SMultReport::from(&s);
    let text = if s.finite {
        format!("node {}: finite, K in {{{}}}\n", x + 1, report.k_values.join(", "))
    } else {
        let cycle = report.certificate.as_ref().expect("infinite sets carry a cycle");
        let cycle = cycle.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        format!("node {}: infinite; ON-cycle {cycle} has product != 1\n", x + 1)
    };
    Ok(Output {
        text,
        json: serde_json::to_value(&report).expect("serializable"),
    })
}

fn inversions(g: &EgcmGraph, w: &[usize]) -> CmdResult {
    let word = GroupWord::from_application_order(w);
    let inv = g.inversion_set(&word)?;
    let b = g.n_bounds_report(&word)?;
    let reduced = inv.word.application_order();
    let mut text = format!(
        "w = {} (reduced {}), length {}\n|N(w)| = {}, bounds {} <= {} <= {}\n",
        render_word(w),
        render_word(&reduced),
        b.length,
        inv.len(),
        b.lower,
        inv.len(),
        b.upper
    );
    for r in &inv.roots {
        writeln!(text, "  {}", render_vec(r)).unwrap();
    }
    let json = json!({
        "word": one_based(w),
        "reduced_word": one_based(&reduced),
        "length": b.length,
        "count": inv.len(),
        "f1": b.f1,
        "f2": b.f2,
        "lower": b.lower,
        "upper": b.upper,
        "roots": inv.roots.iter().map(|r| strings(r)).collect::<Vec<_>>(),
    });
    Ok(Output { text, json })
}

fn reduce(g: &EgcmGraph, w: &[usize]) -> CmdResult {
    let red = g.reduce(&GroupWord::from_application_order(w));
    let reduced = red.word.application_order();
    let mut text = format!("{} (length {})\n", render_word(&reduced), red.length);
    if red.precision_warning {
        text.push_str("warning: long float word; signs near zero may be unreliable\n");
    }
    let json = json!({
        "word": one_based(w),
        "reduced_word": one_based(&reduced),
        "length": red.length,
        "precision_warning": red.precision_warning,
    });
    Ok(Output { text, json })
}

fn factor(g: &EgcmGraph, w: &[usize], i: usize) -> CmdResult {
    let word = GroupWord::from_application_order(w);
    let f = match g.factor_scalar_action(&word, i)? {
        ScalarAction::NotMultiple => {
            let image = g.word_root(&word, i);
            return Ok(Output {
                text: format!("w.alpha_{} = {} is not a multiple of a simple root\n", i + 1, render_vec(&image)),
                json: json!({ "multiple": false, "image": strings(&image) }),
            });
        }
        ScalarAction::Multiple(f) => f,
    };
    let expanded = f.expand(g)?.application_order();
    let path = one_based(&f.path.0);
    let mut text = format!("w.alpha_{} = {} alpha_{}\n", i + 1, f.k, f.x + 1);
    let path_text = path.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    writeln!(text, "ON-path: {path_text}").unwrap();
    for (k, s) in f.er_sequences.iter().enumerate() {
        let partners = one_based(&s.partners).iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        writeln!(text, "S_{k}: root {}, partners [{partners}]", s.root + 1).unwrap();
    }
    if f.trailing_reflection {
        writeln!(text, "trailing s{}", i + 1).unwrap();
    }
    writeln!(text, "expanded: {} (length {})", render_word(&expanded), f.length_sum(g)).unwrap();
    let json = json!({
        "multiple": true,
        "node": i + 1,
        "x": f.x + 1,
        "K": f.k.to_string(),
        "path": path,
        "er_sequences": f.er_sequences.iter().map(|s| json!({
            "root": s.root + 1,
            "partners": one_based(&s.partners),
        })).collect::<Vec<_>>(),
        "trailing_reflection": f.trailing_reflection,
        "expanded_word": one_based(&expanded),
        "length": f.length_sum(g),
    });
    Ok(Output { text, json })
}

fn dominance(g: &EgcmGraph, a: &[Scalar], b: &[Scalar], bound: usize) -> CmdResult {
    Ok(match dominance_test(g, a, b, bound) {
        Dominance::DominatesUpToBound { states } => Output {
            text: format!("dominates up to length {bound} ({states} states searched)\n"),
            json: json!({ "result": "dominates_up_to_bound", "bound": bound, "states": states }),
        },
        Dominance::NotDominates { witness } => {
            let w = witness.application_order();
            Output {
                text: format!("does not dominate: witness {}\n", render_word(&w)),
                json: json!({ "result": "not_dominates", "witness": one_based(&w) }),
            }
        }
    })
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Terminated => "terminated",
        Outcome::StepLimit => "step_limit",
        Outcome::SequenceEnded => "sequence_ended",
    }
}

fn game(g: &EgcmGraph, pos: &[Scalar], strategy: &Strategy, max_steps: usize) -> CmdResult {
    let record = play(g, pos, strategy, max_steps)?;
    let red = g.reduce(&record.word());
    let is_reduced = red.length == record.steps;
    let phrase = match record.outcome {
        Outcome::Terminated => "terminated",
        Outcome::StepLimit => "stopped at the step limit",
        Outcome::SequenceEnded => "sequence ended",
    };
    let text = format!(
        "{phrase} in {} steps; word {} {}\nfinal position {}\n",
        record.steps,
        render_word(&record.fired),
        if is_reduced { "reduced" } else { "not reduced" },
        render_vec(&record.final_position)
    );
    let json = json!({
        "initial": strings(&record.initial),
        "final_position": strings(&record.final_position),
        "fired": one_based(&record.fired),
        "outcome": outcome_name(record.outcome),
        "steps": record.steps,
        "is_reduced": is_reduced,
        "reduced_word": one_based(&red.word.application_order()),
    });
    Ok(Output { text, json })
}

fn finite(g: &EgcmGraph, max_steps: usize) -> CmdResult {
    let t = finite_group_test(g, max_steps)?;
    Ok(match &t {
        FiniteTest::Finite { steps, word } => {
            let w = word.application_order();
            Output {
                text: format!("finite: longest element has length {steps}, word {}\n", render_word(&w)),
                json: json!({ "result": t.label(), "steps": steps, "word": one_based(&w) }),
            }
        }
        FiniteTest::InfiniteEvidence { matrix_type, steps } => Output {
            text: format!("infinite: no termination in {steps} steps, matrix type {matrix_type}\n"),
            json: json!({ "result": t.label(), "steps": steps, "matrix_type": matrix_type }),
        },
        FiniteTest::Inconclusive { steps } => Output {
            text: format!("inconclusive after {steps} steps\n"),
            json: json!({ "result": t.label(), "steps": steps }),
        },
    })
}

fn serve(host: &str, port: u16, max_sessions: usize, idle_minutes: u64) -> CmdResult {
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .map_err(|e| Failure::new("InvalidAddress", format!("{host}:{port}: {e}")))?;
    let config = coxroot_service::StoreConfig {
        max_sessions,
        idle_timeout: Duration::from_secs(idle_minutes * 60),
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::new("IoError", e))?;
    runtime
        .block_on(async {
            let listener = tokio::net::TcpListener::bind(addr).await?;
            eprintln!("listening on http://{}/api", listener.local_addr()?);
            coxroot_service::serve(listener, config).await
        })
        .map_err(|e| Failure::new("IoError", e))?;
    Ok(Output {
        text: String::new(),
        json: Value::Null,
    })
}
