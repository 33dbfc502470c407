//! Tokenizer shared by the pattern, theory, model and script formats.

use std::fmt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Str(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Colon,
    Assign,
    Dollar,
    Bang,
    Star,
    Arrow,
    Iff,
    Lt,
    Gt,
    Eq,
    Neq,
    Hole,
    CeilOpen,
    CeilClose,
    FloorOpen,
    FloorClose,
    // unicode aliases that have no ASCII single-token equivalent
    ExistsSym,
    MuSym,
    ForallSym,
    NuSym,
    BotSym,
    TopSym,
    AndSym,
    OrSym,
    InSym,
    NotInSym,
    SubsetSym,
    NotSubsetSym,
    Newline,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Num(n) => return write!(f, "`{n}`"),
            Tok::Str(s) => return write!(f, "\"{s}\""),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Comma => "`,`",
            Tok::Dot => "`.`",
            Tok::Colon => "`:`",
            Tok::Assign => "`:=`",
            Tok::Dollar => "`$`",
            Tok::Bang => "`!`",
            Tok::Star => "`*`",
            Tok::Arrow => "`--->`",
            Tok::Iff => "`<--->`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Eq => "`=`",
            Tok::Neq => "`!=`",
            Tok::Hole => "`[]`",
            Tok::CeilOpen => "`⌈`",
            Tok::CeilClose => "`⌉`",
            Tok::FloorOpen => "`⌊`",
            Tok::FloorClose => "`⌋`",
            Tok::ExistsSym => "`∃`",
            Tok::MuSym => "`μ`",
            Tok::ForallSym => "`∀`",
            Tok::NuSym => "`ν`",
            Tok::BotSym => "`⊥`",
            Tok::TopSym => "`⊤`",
            Tok::AndSym => "`∧`",
            Tok::OrSym => "`∨`",
            Tok::InSym => "`∈`",
            Tok::NotInSym => "`∉`",
            Tok::SubsetSym => "`⊆`",
            Tok::NotSubsetSym => "`⊄`",
            Tok::Newline => "end of line",
        };
        f.write_str(s)
    }
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub loc: Loc,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits `src` into tokens. `--` starts a comment (unless it begins `--->`).
/// Newlines are emitted only when `newlines` is set.
pub fn tokenize(src: &str, newlines: bool) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let loc = Loc { line, col };
        let rest = |s: &str| chars[i..].iter().take(s.chars().count()).copied().eq(s.chars());
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, loc });
            *i += width;
            *col += width;
        };
        if c == '\n' {
            if newlines {
                out.push(Token { tok: Tok::Newline, loc });
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if rest("<--->") {
            push(Tok::Iff, 5, &mut i, &mut col);
            continue;
        }
        if rest("--->") {
            push(Tok::Arrow, 4, &mut i, &mut col);
            continue;
        }
        if rest("--") {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if rest(":=") {
            push(Tok::Assign, 2, &mut i, &mut col);
            continue;
        }
        if rest("!=") {
            push(Tok::Neq, 2, &mut i, &mut col);
            continue;
        }
        if rest("[]") {
            push(Tok::Hole, 2, &mut i, &mut col);
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), loc });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<u64>().map_err(|_| ParseError::new(loc, format!("number `{s}` out of range")))?;
            col += i - start;
            out.push(Token { tok: Tok::Num(n), loc });
            continue;
        }
        if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if j >= chars.len() || chars[j] != '"' {
                return Err(ParseError::new(loc, "unterminated string"));
            }
            let s: String = chars[start..j].iter().collect();
            col += j + 1 - i;
            i = j + 1;
            out.push(Token { tok: Tok::Str(s), loc });
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            ':' => Tok::Colon,
            '$' => Tok::Dollar,
            '!' | '¬' => Tok::Bang,
            '*' => Tok::Star,
            '<' | '⟨' => Tok::Lt,
            '>' | '⟩' => Tok::Gt,
            '=' => Tok::Eq,
            '≠' => Tok::Neq,
            '□' => Tok::Hole,
            '→' => Tok::Arrow,
            '↔' => Tok::Iff,
            '⌈' => Tok::CeilOpen,
            '⌉' => Tok::CeilClose,
            '⌊' => Tok::FloorOpen,
            '⌋' => Tok::FloorClose,
            '∃' => Tok::ExistsSym,
            'μ' => Tok::MuSym,
            '∀' => Tok::ForallSym,
            'ν' => Tok::NuSym,
            '⊥' => Tok::BotSym,
            '⊤' => Tok::TopSym,
            '∧' => Tok::AndSym,
            '∨' => Tok::OrSym,
            '∈' => Tok::InSym,
            '∉' => Tok::NotInSym,
            '⊆' => Tok::SubsetSym,
            '⊄' | '⊈' => Tok::NotSubsetSym,
            other => return Err(ParseError::new(loc, format!("unexpected character `{other}`"))),
        };
        push(tok, 1, &mut i, &mut col);
    }
    Ok(out)
}
