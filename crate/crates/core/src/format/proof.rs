//! `.mlproof` proof objects: canonical JSON with sorted keys.
//!
//! ```text
//! { "schema": "mlw-proof/1",
//!   "theory": "DEF",
//!   "terms": [ ["evar","x"], ["bot"], ["imp",0,1], ... ],
//!   "nodes": [ { "rule": "Proposition 1", "patterns": [0,1], "conclusion": 7 }, ... ] }
//! ```
//!
//! Patterns are stored once in the `terms` table, each entry referring only
//! to earlier entries. Node fields besides `rule` and `conclusion`:
//! `premises` (node indices), `patterns` (term indices, in schema order),
//! `evar`, `svar`, `axiom`, and `contexts` (lists of `["left", t]` /
//! `["right", t]` steps). The root is the last node.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::kernel::{AppContext, CtxStep, Derivation, Rule};
use crate::syntax::{DbIndex, EVar, NotationEnv, Pattern, SVar};

pub const SCHEMA: &str = "mlw-proof/1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofObject {
    pub theory: String,
    pub derivation: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

fn err(path: impl Into<String>, message: impl Into<String>) -> SchemaError {
    SchemaError {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Term {
    EVar(EVar),
    SVar(SVar),
    BEVar(DbIndex),
    BSVar(DbIndex),
    Sym(String),
    Bot,
    App(usize, usize),
    Imp(usize, usize),
    Exists(usize),
    Mu(usize),
    Notation(String, Vec<usize>),
}

#[derive(Default)]
struct Interner {
    terms: Vec<Term>,
    ids: HashMap<Term, usize>,
    by_ptr: HashMap<*const Pattern, usize>,
}

impl Interner {
    fn arc(&mut self, p: &Arc<Pattern>) -> usize {
        let key = Arc::as_ptr(p);
        if let Some(&id) = self.by_ptr.get(&key) {
            return id;
        }
        let id = self.intern(p);
        self.by_ptr.insert(key, id);
        id
    }

    fn intern(&mut self, p: &Pattern) -> usize {
        let t = match p {
            Pattern::FreeEVar(x) => Term::EVar(x.clone()),
            Pattern::FreeSVar(x) => Term::SVar(x.clone()),
            Pattern::BoundEVar(n) => Term::BEVar(*n),
            Pattern::BoundSVar(n) => Term::BSVar(*n),
            Pattern::Sym(s) => Term::Sym(s.to_string()),
            Pattern::Bot => Term::Bot,
            Pattern::App(l, r) => Term::App(self.arc(l), self.arc(r)),
            Pattern::Imp(l, r) => Term::Imp(self.arc(l), self.arc(r)),
            Pattern::Exists(b) => Term::Exists(self.arc(b)),
            Pattern::Mu(b) => Term::Mu(self.arc(b)),
            Pattern::Notation(n) => Term::Notation(
                n.def.name().to_owned(),
                n.args.iter().map(|a| self.intern(a)).collect(),
            ),
        };
        if let Some(&id) = self.ids.get(&t) {
            return id;
        }
        self.terms.push(t.clone());
        self.ids.insert(t, self.terms.len() - 1);
        self.terms.len() - 1
    }
}

fn term_json(t: &Term) -> Value {
    match t {
        Term::EVar(x) => json!(["evar", x.as_str()]),
        Term::SVar(x) => json!(["svar", x.as_str()]),
        Term::BEVar(n) => json!(["bevar", n]),
        Term::BSVar(n) => json!(["bsvar", n]),
        Term::Sym(s) => json!(["sym", s]),
        Term::Bot => json!(["bot"]),
        Term::App(l, r) => json!(["app", l, r]),
        Term::Imp(l, r) => json!(["imp", l, r]),
        Term::Exists(b) => json!(["exists", b]),
        Term::Mu(b) => json!(["mu", b]),
        Term::Notation(name, args) => json!(["notation", name, args]),
    }
}

/// Canonical bytes of a proof object.
pub fn encode_proof(proof: &ProofObject) -> Vec<u8> {
    let mut int = Interner::default();
    let mut nodes = Vec::with_capacity(proof.derivation.len());
    for node in &proof.derivation.nodes {
        let mut obj: BTreeMap<&str, Value> = BTreeMap::new();
        obj.insert("rule", json!(node.rule.name()));
        let premises = node.rule.premises();
        if !premises.is_empty() {
            obj.insert("premises", json!(premises));
        }
        let mut patterns = Vec::new();
        let ctx = |c: &AppContext, int: &mut Interner| -> Value {
            Value::Array(
                c.path
                    .iter()
                    .map(|s| match s {
                        CtxStep::Left(p) => json!(["left", int.intern(p)]),
                        CtxStep::Right(p) => json!(["right", int.intern(p)]),
                    })
                    .collect(),
            )
        };
        match &node.rule {
            Rule::Hypothesis { axiom } => {
                obj.insert("axiom", json!(axiom));
            }
            Rule::Prop1 { p1, p2 } => patterns = vec![p1, p2],
            Rule::Prop2 { p1, p2, p3 }
            | Rule::PropagationOrLeft { p1, p2, p3 }
            | Rule::PropagationOrRight { p1, p2, p3 } => patterns = vec![p1, p2, p3],
            Rule::Prop3 { p } | Rule::PropagationBotLeft { p } | Rule::PropagationBotRight { p } => {
                patterns = vec![p]
            }
            Rule::ModusPonens { .. } | Rule::Existence => {}
            Rule::ExQuantifier { body, x } | Rule::ExGen { body, x, .. } => {
                patterns = vec![body];
                obj.insert("evar", json!(x.as_str()));
            }
            Rule::PropagationExLeft { body, p } => patterns = vec![body, p],
            Rule::PropagationExRight { p, body } => patterns = vec![p, body],
            Rule::FramingLeft { frame, .. } | Rule::FramingRight { frame, .. } => {
                patterns = vec![frame]
            }
            Rule::Substitution { psi, var, .. } => {
                patterns = vec![psi];
                obj.insert("svar", json!(var.as_str()));
            }
            Rule::PreFixpoint { body } | Rule::KnasterTarski { body, .. } => patterns = vec![body],
            Rule::Singleton { ctx1, ctx2, x, p } => {
                patterns = vec![p];
                obj.insert("evar", json!(x.as_str()));
                let c1 = ctx(ctx1, &mut int);
                let c2 = ctx(ctx2, &mut int);
                obj.insert("contexts", json!([c1, c2]));
            }
        }
        if !patterns.is_empty() {
            let ids: Vec<usize> = patterns.into_iter().map(|p| int.intern(p)).collect();
            obj.insert("patterns", json!(ids));
        }
        obj.insert("conclusion", json!(int.intern(&node.conclusion)));
        nodes.push(obj);
    }
    let mut top: BTreeMap<&str, Value> = BTreeMap::new();
    top.insert("schema", json!(SCHEMA));
    top.insert("theory", json!(proof.theory));
    top.insert("terms", Value::Array(int.terms.iter().map(term_json).collect()));
    top.insert("nodes", serde_json::to_value(nodes).expect("plain JSON"));
    // serde_json::Value keeps its own key order; go through a sorted writer
    let mut out = Vec::new();
    write_canonical(&mut out, &serde_json::to_value(top).expect("plain JSON"));
    out.push(b'\n');
    out
}

fn write_canonical(out: &mut Vec<u8>, v: &Value) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push(b'{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(b',');
                }
                out.extend(serde_json::to_vec(k).expect("string"));
                out.push(b':');
                write_canonical(out, &map[k]);
            }
            out.push(b'}');
        }
        Value::Array(items) => {
            out.push(b'[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(b',');
                }
                write_canonical(out, item);
            }
            out.push(b']');
        }
        scalar => out.extend(serde_json::to_vec(scalar).expect("scalar")),
    }
}

struct Decoder<'e> {
    env: &'e NotationEnv,
    terms: Vec<Pattern>,
}

fn as_index(v: &Value, path: &str) -> Result<usize, SchemaError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn as_str<'v>(v: &'v Value, path: &str) -> Result<&'v str, SchemaError> {
    v.as_str().ok_or_else(|| err(path, "expected a string"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, SchemaError> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

impl Decoder<'_> {
    fn term_ref(&self, v: &Value, path: &str) -> Result<Pattern, SchemaError> {
        let i = as_index(v, path)?;
        self.terms
            .get(i)
            .cloned()
            .ok_or_else(|| err(path, format!("term #{i} is not defined before its use")))
    }

    fn term(&self, v: &Value, path: &str) -> Result<Pattern, SchemaError> {
        let a = as_array(v, path)?;
        let tag = as_str(a.first().ok_or_else(|| err(path, "empty term"))?, &format!("{path}[0]"))?;
        let arity = |n: usize| {
            if a.len() == n + 1 {
                Ok(())
            } else {
                Err(err(path, format!("`{tag}` takes {n} field(s)")))
            }
        };
        let field = |i: usize| format!("{path}[{i}]");
        Ok(match tag {
            "evar" | "svar" | "sym" => {
                arity(1)?;
                let name = as_str(&a[1], &field(1))?;
                match tag {
                    "evar" => Pattern::evar(name),
                    "svar" => Pattern::svar(name),
                    _ => Pattern::sym(name),
                }
            }
            "bevar" | "bsvar" => {
                arity(1)?;
                let n = a[1].as_u64().ok_or_else(|| err(field(1), "expected an index"))?;
                if tag == "bevar" {
                    Pattern::BoundEVar(n)
                } else {
                    Pattern::BoundSVar(n)
                }
            }
            "bot" => {
                arity(0)?;
                Pattern::Bot
            }
            "app" | "imp" => {
                arity(2)?;
                let l = self.term_ref(&a[1], &field(1))?;
                let r = self.term_ref(&a[2], &field(2))?;
                if tag == "app" {
                    Pattern::app(l, r)
                } else {
                    Pattern::imp(l, r)
                }
            }
            "exists" | "mu" => {
                arity(1)?;
                let b = self.term_ref(&a[1], &field(1))?;
                if tag == "exists" {
                    Pattern::exists(b)
                } else {
                    Pattern::mu(b)
                }
            }
            "notation" => {
                arity(2)?;
                let name = as_str(&a[1], &field(1))?;
                let args = as_array(&a[2], &field(2))?
                    .iter()
                    .enumerate()
                    .map(|(i, v)| self.term_ref(v, &format!("{path}[2][{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                match self.env.apply(name, args) {
                    None => return Err(err(field(1), format!("unknown notation `{name}`"))),
                    Some(Err(e)) => return Err(err(path, e.to_string())),
                    Some(Ok(p)) => p,
                }
            }
            other => return Err(err(field(0), format!("unknown term tag `{other}`"))),
        })
    }
}

const NODE_FIELDS: &[&str] = &[
    "rule",
    "conclusion",
    "premises",
    "patterns",
    "evar",
    "svar",
    "axiom",
    "contexts",
];

/// Decodes a proof object. Notation names are resolved in `env`. The
/// result is not checked; see [`crate::kernel::import`].
pub fn decode_proof(bytes: &[u8], env: &NotationEnv) -> Result<ProofObject, SchemaError> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| err("$", e.to_string()))?;
    let top = v.as_object().ok_or_else(|| err("$", "expected an object"))?;
    for k in top.keys() {
        if !["schema", "theory", "terms", "nodes"].contains(&k.as_str()) {
            return Err(err(format!("$.{k}"), "unknown field"));
        }
    }
    let get = |k: &str| top.get(k).ok_or_else(|| err(format!("$.{k}"), "missing field"));
    let schema = as_str(get("schema")?, "$.schema")?;
    if schema != SCHEMA {
        return Err(err("$.schema", format!("unsupported schema `{schema}`, expected `{SCHEMA}`")));
    }
    let theory = as_str(get("theory")?, "$.theory")?.to_owned();
    let mut dec = Decoder {
        env,
        terms: Vec::new(),
    };
    for (i, t) in as_array(get("terms")?, "$.terms")?.iter().enumerate() {
        let p = dec.term(t, &format!("$.terms[{i}]"))?;
        dec.terms.push(p);
    }
    let mut derivation = Derivation::new();
    for (i, n) in as_array(get("nodes")?, "$.nodes")?.iter().enumerate() {
        let path = format!("$.nodes[{i}]");
        let (rule, conclusion) = decode_node(&dec, n, &path)?;
        derivation.push(rule, conclusion);
    }
    Ok(ProofObject { theory, derivation })
}

fn decode_node(dec: &Decoder<'_>, n: &Value, path: &str) -> Result<(Rule, Pattern), SchemaError> {
    let obj = n.as_object().ok_or_else(|| err(path, "expected an object"))?;
    for k in obj.keys() {
        if !NODE_FIELDS.contains(&k.as_str()) {
            return Err(err(format!("{path}.{k}"), "unknown field"));
        }
    }
    let rule_name = as_str(
        obj.get("rule").ok_or_else(|| err(format!("{path}.rule"), "missing field"))?,
        &format!("{path}.rule"),
    )?;
    let conclusion = dec.term_ref(
        obj.get("conclusion")
            .ok_or_else(|| err(format!("{path}.conclusion"), "missing field"))?,
        &format!("{path}.conclusion"),
    )?;
    let list = |k: &str, want: usize| -> Result<Vec<Value>, SchemaError> {
        let p = format!("{path}.{k}");
        match obj.get(k) {
            None if want == 0 => Ok(Vec::new()),
            None => Err(err(p, "missing field")),
            Some(v) => {
                let a = as_array(v, &p)?;
                if a.len() != want {
                    return Err(err(p, format!("expected {want} entries, found {}", a.len())));
                }
                Ok(a.clone())
            }
        }
    };
    let premises: Vec<usize> = {
        let want = expected_premises(rule_name);
        list("premises", want)?
            .iter()
            .enumerate()
            .map(|(i, v)| as_index(v, &format!("{path}.premises[{i}]")))
            .collect::<Result<_, _>>()?
    };
    let pats = |want: usize| -> Result<Vec<Pattern>, SchemaError> {
        list("patterns", want)?
            .iter()
            .enumerate()
            .map(|(i, v)| dec.term_ref(v, &format!("{path}.patterns[{i}]")))
            .collect()
    };
    let name = |k: &str| -> Result<String, SchemaError> {
        let p = format!("{path}.{k}");
        Ok(as_str(obj.get(k).ok_or_else(|| err(&p, "missing field"))?, &p)?.to_owned())
    };
    let mut used: Vec<&str> = vec!["rule", "conclusion"];
    if !premises.is_empty() {
        used.push("premises");
    }
    let rule = match rule_name {
        "Hypothesis" => {
            used.push("axiom");
            Rule::Hypothesis { axiom: name("axiom")? }
        }
        "Proposition 1" => {
            let [p1, p2] = arr(pats(2)?);
            Rule::Prop1 { p1, p2 }
        }
        "Proposition 2" => {
            let [p1, p2, p3] = arr(pats(3)?);
            Rule::Prop2 { p1, p2, p3 }
        }
        "Proposition 3" => {
            let [p] = arr(pats(1)?);
            Rule::Prop3 { p }
        }
        "Modus Ponens" => Rule::ModusPonens {
            minor: premises[0],
            major: premises[1],
        },
        "∃-Quantifier" => {
            let [body] = arr(pats(1)?);
            used.push("evar");
            Rule::ExQuantifier {
                body,
                x: EVar::new(name("evar")?),
            }
        }
        "∃-Generalization" => {
            let [body] = arr(pats(1)?);
            used.push("evar");
            Rule::ExGen {
                premise: premises[0],
                body,
                x: EVar::new(name("evar")?),
            }
        }
        "Propagation Left_⊥" => {
            let [p] = arr(pats(1)?);
            Rule::PropagationBotLeft { p }
        }
        "Propagation Right_⊥" => {
            let [p] = arr(pats(1)?);
            Rule::PropagationBotRight { p }
        }
        "Propagation Left_∨" => {
            let [p1, p2, p3] = arr(pats(3)?);
            Rule::PropagationOrLeft { p1, p2, p3 }
        }
        "Propagation Right_∨" => {
            let [p1, p2, p3] = arr(pats(3)?);
            Rule::PropagationOrRight { p1, p2, p3 }
        }
        "Propagation Left_∃" => {
            let [body, p] = arr(pats(2)?);
            Rule::PropagationExLeft { body, p }
        }
        "Propagation Right_∃" => {
            let [p, body] = arr(pats(2)?);
            Rule::PropagationExRight { p, body }
        }
        "Framing Left" => {
            let [frame] = arr(pats(1)?);
            Rule::FramingLeft {
                premise: premises[0],
                frame,
            }
        }
        "Framing Right" => {
            let [frame] = arr(pats(1)?);
            Rule::FramingRight {
                premise: premises[0],
                frame,
            }
        }
        "Substitution" => {
            let [psi] = arr(pats(1)?);
            used.push("svar");
            Rule::Substitution {
                premise: premises[0],
                psi,
                var: SVar::new(name("svar")?),
            }
        }
        "Pre-Fixpoint" => {
            let [body] = arr(pats(1)?);
            Rule::PreFixpoint { body }
        }
        "Knaster-Tarski" => {
            let [body] = arr(pats(1)?);
            Rule::KnasterTarski {
                premise: premises[0],
                body,
            }
        }
        "Existence" => Rule::Existence,
        "Singleton" => {
            let [p] = arr(pats(1)?);
            used.push("evar");
            used.push("contexts");
            let cs = list("contexts", 2)?;
            let ctx1 = decode_ctx(dec, &cs[0], &format!("{path}.contexts[0]"))?;
            let ctx2 = decode_ctx(dec, &cs[1], &format!("{path}.contexts[1]"))?;
            Rule::Singleton {
                ctx1,
                ctx2,
                x: EVar::new(name("evar")?),
                p,
            }
        }
        other => return Err(err(format!("{path}.rule"), format!("unknown rule `{other}`"))),
    };
    if obj.contains_key("patterns") {
        used.push("patterns");
    }
    for k in obj.keys() {
        if !used.contains(&k.as_str()) {
            return Err(err(format!("{path}.{k}"), format!("not a field of `{rule_name}`")));
        }
    }
    Ok((rule, conclusion))
}

fn expected_premises(rule: &str) -> usize {
    match rule {
        "Modus Ponens" => 2,
        "∃-Generalization" | "Framing Left" | "Framing Right" | "Substitution" | "Knaster-Tarski" => 1,
        _ => 0,
    }
}

fn arr<const N: usize>(v: Vec<Pattern>) -> [Pattern; N] {
    v.try_into().unwrap_or_else(|_| unreachable!("length checked by the caller"))
}

fn decode_ctx(dec: &Decoder<'_>, v: &Value, path: &str) -> Result<AppContext, SchemaError> {
    let steps = as_array(v, path)?;
    let mut ctx = AppContext::identity();
    for (i, s) in steps.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let a = as_array(s, &p)?;
        if a.len() != 2 {
            return Err(err(&p, "a context step is [\"left\"|\"right\", term]"));
        }
        let side = dec.term_ref(&a[1], &format!("{p}[1]"))?;
        ctx = ctx.then(match as_str(&a[0], &format!("{p}[0]"))? {
            "left" => CtxStep::Left(side),
            "right" => CtxStep::Right(side),
            other => return Err(err(format!("{p}[0]"), format!("unknown step `{other}`"))),
        });
    }
    Ok(ctx)
}
