//! The command implementations. Each returns an [`Output`] instead of
//! printing, so the binary, the tests and the service share one code path.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use ml_core::format::model::parse_model;
use ml_core::format::proof::{decode_proof, encode_proof};
use ml_core::format::{parse_pattern, print_pattern, Syntax};
use ml_core::kernel::import;
use ml_core::proofmode::script::parse_script;
use ml_core::proofmode::{run_script, TranscriptEntry};
use ml_core::semantics::{
    entails_over, eval_with, find_countervaluation, ElemSet, EvalOptions, Model, Valuation, DEFAULT_BUDGET,
};
use ml_core::syntax::{expand, is_closed, well_formed, wf_positive, EVar, Pattern, SVar};
use ml_core::theories::{LoadedTheory, TheoryLibrary};

/// Exit status, human-readable text and the `--json` form of a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

impl Output {
    fn ok(text: impl Into<String>, json: Value) -> Output {
        Output {
            code: EXIT_OK,
            text: text.into(),
            json,
        }
    }

    fn verdict(holds: bool, text: impl Into<String>, json: Value) -> Output {
        Output {
            code: if holds { EXIT_OK } else { EXIT_FALSE },
            text: text.into(),
            json,
        }
    }

    pub fn error(kind: &str, message: impl Into<String>) -> Output {
        let message = message.into();
        Output {
            code: EXIT_ERROR,
            text: format!("error: {message}"),
            json: json!({ "error": { "kind": kind, "message": message } }),
        }
    }
}

type Res<T> = Result<T, Output>;

/// Enumeration budget: `ML_BUDGET` if set, else the library default.
pub fn budget() -> Res<u64> {
    match std::env::var("ML_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Output::error("usage", format!("ML_BUDGET must be a number, got `{v}`"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// The built-in theories plus, when `spec` names a file, that file and the
/// `.mlth` files next to it.
pub fn load_theory(spec: Option<&str>) -> Res<LoadedTheory> {
    let spec = spec.unwrap_or("empty");
    let mut lib = TheoryLibrary::builtin();
    let path = Path::new(spec);
    let name = if path.is_file() {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            lib.add_dir(dir).map_err(|e| Output::error("theory", e.to_string()))?;
        }
        let text = read(path)?;
        lib.add_source(spec, &text)
            .map_err(|e| Output::error("parse", e.to_string()))?
    } else {
        spec.to_owned()
    };
    lib.load(&name).map_err(|e| Output::error("theory", e.to_string()))
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Output::error("io", format!("{}: {e}", path.display())))
}

pub fn load_model(path: &Path) -> Res<Model> {
    let text = read(path)?;
    let file = parse_model(&text).map_err(|e| Output::error("parse", format!("{}:{e}", path.display())))?;
    file.to_model()
        .map_err(|e| Output::error("model", format!("{}: {e}", path.display())))
}

/// Declares the model's symbols in `syn` as well.
fn declare_model_symbols(syn: &mut Syntax, m: &Model) {
    for (s, _) in m.symbols() {
        syn.signature.declare(s.clone());
    }
}

fn syntax_with(theory: &LoadedTheory, model: Option<&Model>) -> Syntax {
    let mut syn = theory.syntax().clone();
    if let Some(m) = model {
        declare_model_symbols(&mut syn, m);
    }
    syn
}

fn parse(text: &str, syn: &Syntax) -> Res<Pattern> {
    parse_pattern(text, syn).map_err(|e| Output::error("parse", format!("pattern:{e}")))
}

fn rendered(p: &Pattern) -> Value {
    json!({ "folded": print_pattern(p, true), "expanded": print_pattern(&expand(p), false) })
}

pub fn check_wf(pattern: &str, theory: Option<&str>) -> Output {
    let run = || -> Res<Output> {
        let th = load_theory(theory)?;
        let p = parse(pattern, th.syntax())?;
        let core = expand(&p);
        let closed = is_closed(&core);
        let positive = wf_positive(&core);
        let wf = well_formed(&core);
        let mut text = if wf { "well-formed".to_owned() } else { "not well-formed".to_owned() };
        if !closed {
            text.push_str("\n  dangling bound variable");
        }
        if !positive {
            text.push_str("\n  a mu body is not positive in its bound variable");
        }
        Ok(Output::verdict(
            wf,
            text,
            json!({ "well_formed": wf, "closed": closed, "positive": positive, "pattern": rendered(&p) }),
        ))
    };
    run().unwrap_or_else(|e| e)
}

/// `x=one, X={one, two}`
pub fn parse_valuation(text: &str, m: &Model) -> Res<Valuation> {
    let mut rho = Valuation::new();
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in text.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    let elem = |n: &str| {
        m.element(n.trim())
            .ok_or_else(|| Output::error("valuation", format!("unknown element `{}`", n.trim())))
    };
    for part in parts.into_iter().filter(|p| !p.trim().is_empty()) {
        let (var, val) = part
            .split_once('=')
            .ok_or_else(|| Output::error("valuation", format!("expected `name=value`, got `{}`", part.trim())))?;
        let var = var.trim();
        let val = val.trim();
        if var.starts_with(|c: char| c.is_ascii_uppercase()) {
            let inner = val
                .strip_prefix('{')
                .and_then(|v| v.strip_suffix('}'))
                .ok_or_else(|| Output::error("valuation", format!("set variable `{var}` needs a set `{{...}}`")))?;
            let mut s = ElemSet::EMPTY;
            for n in inner.split(',').filter(|n| !n.trim().is_empty()) {
                s.insert(elem(n)?);
            }
            rho.set_svar(SVar::new(var), s);
        } else {
            rho.set_evar(EVar::new(var), elem(val)?);
        }
    }
    Ok(rho)
}

pub fn eval(pattern: &str, model: &Path, valuation: Option<&str>, theory: Option<&str>) -> Output {
    let run = || -> Res<Output> {
        let th = load_theory(theory)?;
        let m = load_model(model)?;
        let p = parse(pattern, &syntax_with(&th, Some(&m)))?;
        let rho = match valuation {
            Some(v) => parse_valuation(v, &m)?,
            None => Valuation::new(),
        };
        let opts = EvalOptions::default().with_budget(budget()?);
        let d = eval_with(&m, &rho, &p, &opts).map_err(|e| Output::error("eval", e.to_string()))?;
        Ok(Output::ok(
            m.show(d),
            json!({ "model": m.name(), "denotation": m.names_of(d), "full": d == m.full() }),
        ))
    };
    run().unwrap_or_else(|e| e)
}

pub fn model_check(pattern: Option<&str>, axioms: bool, model: &Path, theory: Option<&str>) -> Output {
    let run = || -> Res<Output> {
        let th = load_theory(theory)?;
        let m = load_model(model)?;
        let targets: Vec<(String, Pattern)> = match (pattern, axioms) {
            (Some(p), false) => vec![(p.to_owned(), parse(p, &syntax_with(&th, Some(&m)))?)],
            (None, true) => th
                .theory
                .axioms()
                .iter()
                .map(|(n, p)| (n.clone(), p.clone()))
                .collect(),
            _ => return Err(Output::error("usage", "give either a pattern or --axioms")),
        };
        let opts = EvalOptions::default().with_budget(budget()?);
        let mut lines = Vec::new();
        let mut results = Vec::new();
        let mut all = true;
        for (name, p) in &targets {
            let w = find_countervaluation(&m, p, &opts).map_err(|e| Output::error("eval", e.to_string()))?;
            match &w {
                None => lines.push(format!("{name}: holds")),
                Some(w) => {
                    all = false;
                    lines.push(format!(
                        "{name}: fails under {:?}, denotes {}",
                        w.valuation.describe(&m),
                        m.show(w.denotation)
                    ));
                }
            }
            results.push(json!({
                "name": name,
                "holds": w.is_none(),
                "countervaluation": w.as_ref().map(|w| w.valuation.describe(&m)),
                "denotation": w.as_ref().map(|w| m.names_of(w.denotation)),
            }));
        }
        Ok(Output::verdict(
            all,
            lines.join("\n"),
            json!({ "model": m.name(), "holds": all, "results": results }),
        ))
    };
    run().unwrap_or_else(|e| e)
}

pub fn model_files(dir: &Path) -> Res<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Output::error("io", format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "mlmodel"))
        .collect();
    paths.sort();
    Ok(paths)
}

pub fn entails(models: &Path, theory: Option<&str>, goal: &str) -> Output {
    let run = || -> Res<Output> {
        let th = load_theory(theory)?;
        let ms = model_files(models)?
            .iter()
            .map(|p| load_model(p))
            .collect::<Res<Vec<_>>>()?;
        let mut syn = th.syntax().clone();
        for m in &ms {
            declare_model_symbols(&mut syn, m);
        }
        let phi = parse(goal, &syn)?;
        let gamma: Vec<Pattern> = th.theory.axioms().values().cloned().collect();
        let opts = EvalOptions::default().with_budget(budget()?);
        let r = entails_over(&ms, &gamma, &phi, &opts).map_err(|e| Output::error("eval", e.to_string()))?;
        let text = match &r.countermodel {
            None => format!(
                "entailed over {} model(s) satisfying {} ({} skipped)",
                r.checked.len(),
                th.name(),
                r.skipped.len()
            ),
            Some(c) => format!(
                "countermodel {}: valuation {:?}, denotation {{{}}}",
                c.model,
                c.valuation,
                c.denotation.join(", ")
            ),
        };
        let json = serde_json::to_value(&r).expect("serializable");
        Ok(Output::verdict(r.holds, text, json))
    };
    run().unwrap_or_else(|e| e)
}

pub fn check_proof(file: &Path, theory: Option<&str>) -> Output {
    let run = || -> Res<Output> {
        let bytes = std::fs::read(file).map_err(|e| Output::error("io", format!("{}: {e}", file.display())))?;
        // the proof names its theory; an explicit --theory must agree
        let probe: Value = serde_json::from_slice(&bytes)
            .map_err(|e| Output::error("parse", format!("{}: {e}", file.display())))?;
        let named = probe.get("theory").and_then(Value::as_str).map(str::to_owned);
        let th = load_theory(theory.or(named.as_deref()))?;
        let proof = decode_proof(&bytes, &th.syntax().notations)
            .map_err(|e| Output::error("schema", format!("{}: {e}", file.display())))?;
        let t = import(&th.theory, &proof).map_err(|e| {
            let mut o = Output::error(e.kind.code(), format!("{}: {e}", file.display()));
            o.json["error"]["node"] = json!(e.node);
            o
        })?;
        Ok(Output::ok(
            format!("⊢ {}", t.conclusion()),
            json!({
                "theory": t.theory().name(),
                "conclusion": rendered(t.conclusion()),
                "nodes": t.derivation().len(),
            }),
        ))
    };
    run().unwrap_or_else(|e| e)
}

/// Result of `prove`, with the proof bytes for `--export`.
pub struct Proved {
    pub output: Output,
    pub proof: Option<Vec<u8>>,
    pub transcript: Vec<TranscriptEntry>,
}

pub fn prove(script: &Path, theory: Option<&str>, goal: Option<&str>) -> Proved {
    let fail = |o: Output| Proved {
        output: o,
        proof: None,
        transcript: Vec::new(),
    };
    let text = match read(script) {
        Ok(t) => t,
        Err(o) => return fail(o),
    };
    let s = parse_script(&text);
    let th = match load_theory(theory.or(s.theory.as_deref())) {
        Ok(t) => t,
        Err(o) => return fail(o),
    };
    let Some(goal_text) = goal.or(s.goal.as_deref()) else {
        return fail(Output::error("usage", "no goal: pass --goal or put a `goal` line in the script"));
    };
    let g = match parse(goal_text, th.syntax()) {
        Ok(g) => g,
        Err(o) => return fail(o),
    };
    match run_script(th, g, &s.tactics) {
        Ok(run) => {
            let bytes = encode_proof(&run.theorem.export());
            Proved {
                output: Output::ok(
                    format!("⊢ {}\n{} tactic(s), {} proof nodes", run.theorem.conclusion(), s.tactics.len(), run.theorem.derivation().len()),
                    json!({
                        "theory": run.theorem.theory().name(),
                        "conclusion": rendered(run.theorem.conclusion()),
                        "nodes": run.theorem.derivation().len(),
                        "transcript": run.transcript,
                    }),
                ),
                proof: Some(bytes),
                transcript: run.transcript,
            }
        }
        Err(e) => {
            let mut o = Output::error(e.error.code(), format!("{}:{}: {}", script.display(), e.line, e));
            o.json["error"]["step"] = json!(e.step);
            o.json["error"]["line"] = json!(e.line);
            fail(o)
        }
    }
}
