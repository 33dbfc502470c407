//! Pretty printer, the inverse of the pattern grammar.

use crate::syntax::notation::{expand, NotationApp};
use crate::syntax::Pattern;

// Binding levels, loosest first.
const EXPR: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const REL: u8 = 4;
const UNARY: u8 = 5;
const APP: u8 = 6;
const ATOM: u8 = 7;

enum Shape<'a> {
    Atom(String),
    /// Binder keyword and body; extends to the right.
    Binder(&'static str, &'a Pattern),
    Prefix(&'static str, &'a Pattern),
    Infix(u8, &'static str, &'a Pattern, &'a Pattern, u8, u8),
    App(&'a Pattern, &'a Pattern),
    Brackets(&'static str, &'static str, &'a Pattern),
    Call(&'a str, &'a [Pattern]),
}

fn relop(name: &str) -> Option<&'static str> {
    Some(match name {
        "equal" => "=",
        "neq" => "!=",
        "in" => "in",
        "notin" => "notin",
        "subseteq" => "subseteq",
        "notsubseteq" => "notsubseteq",
        _ => return None,
    })
}

fn notation_shape(n: &NotationApp) -> Shape<'_> {
    let a = &n.args;
    match (n.def.name(), a.len()) {
        ("not", 1) => Shape::Prefix("!", &a[0]),
        ("or", 2) => Shape::Infix(OR, "or", &a[0], &a[1], OR, AND),
        ("and", 2) => Shape::Infix(AND, "and", &a[0], &a[1], AND, REL),
        ("iff", 2) => Shape::Infix(EXPR, "<--->", &a[0], &a[1], IMP, IMP),
        ("top", 0) => Shape::Atom("Top".into()),
        ("forall", 1) => Shape::Binder("forall", &a[0]),
        ("nu", 1) => Shape::Binder("nu", &a[0]),
        ("ceil", 1) => Shape::Brackets("⌈", "⌉", &a[0]),
        ("floor", 1) => Shape::Brackets("⌊", "⌋", &a[0]),
        (name, 2) if relop(name).is_some() => {
            Shape::Infix(REL, relop(name).unwrap(), &a[0], &a[1], UNARY, UNARY)
        }
        (name, _) => Shape::Call(name, a),
    }
}

fn shape(p: &Pattern) -> Shape<'_> {
    match p {
        Pattern::FreeEVar(x) => Shape::Atom(x.to_string()),
        Pattern::FreeSVar(x) => Shape::Atom(x.to_string()),
        Pattern::BoundEVar(n) => Shape::Atom(format!("b{n}")),
        Pattern::BoundSVar(n) => Shape::Atom(format!("S{n}")),
        Pattern::Sym(s) => Shape::Atom(s.to_string()),
        Pattern::Bot => Shape::Atom("Bot".into()),
        Pattern::App(l, r) => Shape::App(l, r),
        Pattern::Imp(l, r) => Shape::Infix(IMP, "--->", l, r, OR, IMP),
        Pattern::Exists(b) => Shape::Binder("exists", b),
        Pattern::Mu(b) => Shape::Binder("mu", b),
        Pattern::Notation(n) => notation_shape(n),
    }
}

fn level(s: &Shape<'_>) -> u8 {
    match s {
        Shape::Atom(_) | Shape::Brackets(..) | Shape::Call(..) => ATOM,
        Shape::Binder(..) => EXPR,
        Shape::Prefix(..) => UNARY,
        Shape::Infix(l, ..) => *l,
        Shape::App(..) => APP,
    }
}

/// `min`: loosest level allowed without parentheses. `tail`: nothing follows
/// this sub-term inside the current parenthesis group.
fn write(out: &mut String, p: &Pattern, min: u8, tail: bool) {
    let s = shape(p);
    let paren = match s {
        Shape::Binder(..) => min > UNARY || !tail,
        _ => level(&s) < min,
    };
    if paren {
        out.push('(');
        write_shape(out, s, true);
        out.push(')');
    } else {
        write_shape(out, s, tail);
    }
}

fn write_shape(out: &mut String, s: Shape<'_>, tail: bool) {
    match s {
        Shape::Atom(a) => out.push_str(&a),
        Shape::Binder(kw, body) => {
            out.push_str(kw);
            out.push_str(" . ");
            write(out, body, EXPR, tail);
        }
        Shape::Prefix(op, arg) => {
            out.push_str(op);
            out.push(' ');
            write(out, arg, UNARY, tail);
        }
        Shape::Infix(_, op, l, r, lmin, rmin) => {
            write(out, l, lmin, false);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            write(out, r, rmin, tail);
        }
        Shape::App(l, r) => {
            write(out, l, APP, false);
            out.push(' ');
            write(out, r, ATOM, false);
        }
        Shape::Brackets(open, close, inner) => {
            out.push_str(open);
            out.push(' ');
            write(out, inner, EXPR, true);
            out.push(' ');
            out.push_str(close);
        }
        Shape::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(out, a, EXPR, true);
            }
            out.push(')');
        }
    }
}

/// Renders `p` in the concrete syntax. With `fold_notations` unset the
/// pattern is expanded first and only core constructors are printed.
pub fn print_pattern(p: &Pattern, fold_notations: bool) -> String {
    let mut out = String::new();
    if fold_notations {
        write(&mut out, p, EXPR, true);
    } else {
        write(&mut out, &expand(p), EXPR, true);
    }
    out
}
