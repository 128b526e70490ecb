use num_bigint::BigInt;

use crate::diagnostic::{Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Colon,
    Semi,
    Comma,
    Amp,
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    Slash,
    Prime,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Assign,
    DotDot,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Amp => "&",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Eq => "=",
            Tok::Ge => ">=",
            Tok::Gt => ">",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Prime => "'",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Assign => ":=",
            Tok::DotDot => "..",
            Tok::Ident(_) | Tok::Int(_) => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits `text` into tokens. `--` starts a comment running to the end of the line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let start = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '-' && chars.get(i + 1) == Some(&'-') {
                break;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[i..j].iter().collect()),
                    span: SourceSpan::new(line_no, start, j + 1),
                });
                i = j;
                continue;
            }
            if c.is_ascii_digit() {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                out.push(Token {
                    tok: Tok::Int(digits.parse().expect("ascii digits")),
                    span: SourceSpan::new(line_no, start, j + 1),
                });
                i = j;
                continue;
            }
            let next = chars.get(i + 1).copied();
            let (tok, width) = match (c, next) {
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                (':', Some('=')) => (Tok::Assign, 2),
                ('.', Some('.')) => (Tok::DotDot, 2),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                ('=', _) => (Tok::Eq, 1),
                (':', _) => (Tok::Colon, 1),
                (';', _) => (Tok::Semi, 1),
                (',', _) => (Tok::Comma, 1),
                ('&', _) => (Tok::Amp, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('\'', _) => (Tok::Prime, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                _ => {
                    return Err(Diagnostic::at(
                        SourceSpan::new(line_no, start, start + 1),
                        format!("unexpected character `{c}`"),
                    ))
                }
            };
            out.push(Token {
                tok,
                span: SourceSpan::new(line_no, start, start + width),
            });
            i += width;
        }
    }
    Ok(out)
}
