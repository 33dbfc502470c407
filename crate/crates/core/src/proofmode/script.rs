//! `.mlp` tactic scripts.
//!
//! One tactic per line; `--` starts a comment; leading `*`, `+` or `-`
//! bullets are ignored. Before the first tactic a script may name its
//! theory and goal:
//!
//! ```text
//! theory DEF
//! goal ⌈ y and x ⌉ ---> y = x
//! mlIntro "H0"
//! ```
//!
//! A final `qed` line is optional.

use serde::Serialize;
use thiserror::Error;

use super::{ProofModeError, Session, StateView};
use crate::kernel::Theorem;
use crate::syntax::Pattern;
use crate::theories::LoadedTheory;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptLine {
    /// 1-based line number in the file.
    pub line: usize,
    pub text: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub theory: Option<String>,
    pub goal: Option<String>,
    pub tactics: Vec<ScriptLine>,
}

/// Strips a `--` comment, leaving `--->` and `<--->` and strings alone.
fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'"' => in_str = !in_str,
            b'-' if !in_str => {
                if line[i..].starts_with("--->") {
                    i += 4;
                    continue;
                }
                if line[i..].starts_with("--") {
                    return &line[..i];
                }
            }
            _ => {}
        }
        i += 1;
    }
    line
}

pub fn parse_script(text: &str) -> Script {
    let mut s = Script::default();
    for (i, raw) in text.lines().enumerate() {
        let mut t = strip_comment(raw).trim();
        while let Some(rest) = t.strip_prefix(['*', '+', '-']) {
            if rest.starts_with("--") {
                break;
            }
            t = rest.trim_start();
        }
        if t.is_empty() {
            continue;
        }
        if s.tactics.is_empty() {
            if let Some(name) = t.strip_prefix("theory ") {
                s.theory = Some(name.trim().to_owned());
                continue;
            }
            if let Some(goal) = t.strip_prefix("goal ") {
                s.goal = Some(goal.trim().to_owned());
                continue;
            }
        }
        if matches!(t, "qed" | "Qed." | "qed.") {
            break;
        }
        s.tactics.push(ScriptLine {
            line: i + 1,
            text: t.to_owned(),
        });
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranscriptEntry {
    /// 0 for the initial state.
    pub step: usize,
    pub line: usize,
    pub tactic: Option<String>,
    pub state: StateView,
}

#[derive(Clone, Debug)]
pub struct ScriptRun {
    pub theorem: Theorem,
    pub session: Session,
    pub transcript: Vec<TranscriptEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("step {step} (line {line}) `{tactic}`: {error}")]
pub struct ScriptError {
    pub step: usize,
    pub line: usize,
    pub tactic: String,
    pub error: ProofModeError,
}

/// Runs the tactics in order and then `qed`.
pub fn run_script(theory: LoadedTheory, goal: Pattern, tactics: &[ScriptLine]) -> Result<ScriptRun, ScriptError> {
    let mut s = Session::new(theory, goal).map_err(|error| ScriptError {
        step: 0,
        line: 0,
        tactic: "goal".into(),
        error,
    })?;
    let mut transcript = vec![TranscriptEntry {
        step: 0,
        line: 0,
        tactic: None,
        state: s.view(),
    }];
    for (i, t) in tactics.iter().enumerate() {
        s.apply_text(&t.text).map_err(|error| ScriptError {
            step: i + 1,
            line: t.line,
            tactic: t.text.clone(),
            error,
        })?;
        transcript.push(TranscriptEntry {
            step: i + 1,
            line: t.line,
            tactic: Some(t.text.clone()),
            state: s.view(),
        });
    }
    let theorem = s.qed().map_err(|error| ScriptError {
        step: tactics.len() + 1,
        line: tactics.last().map_or(0, |t| t.line),
        tactic: "qed".into(),
        error,
    })?;
    Ok(ScriptRun {
        theorem,
        session: s,
        transcript,
    })
}
