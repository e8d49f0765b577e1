//! Indentation-aware tokenizer.

use super::ast::Span;
use super::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    For,
    In,
    If,
    Elif,
    Else,
    And,
    Or,
    Not,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    Newline,
    Indent,
    Dedent,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(v) => format!("number `{v}`"),
            Tok::Newline => "end of line".into(),
            Tok::Indent => "indent".into(),
            Tok::Dedent => "dedent".into(),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::For => "for",
            Tok::In => "in",
            Tok::If => "if",
            Tok::Elif => "elif",
            Tok::Else => "else",
            Tok::And => "and",
            Tok::Or => "or",
            Tok::Not => "not",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Assign => "=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::EqEq => "==",
            Tok::Ne => "!=",
            Tok::Ident(_) => "identifier",
            Tok::Number(_) => "number",
            Tok::Newline => "newline",
            Tok::Indent => "indent",
            Tok::Dedent => "dedent",
            Tok::Eof => "eof",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn syntax(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError {
        span,
        kind: ParseErrorKind::Syntax {
            expected: Vec::new(),
            found: msg.into(),
        },
    }
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut indents: Vec<u32> = vec![0];
    let mut depth = 0usize; // bracket nesting
    let mut continuation = false;

    for (lineno, raw) in source.lines().enumerate() {
        let line_no = lineno as u32 + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0usize;

        if depth == 0 && !continuation {
            let mut width = 0u32;
            while i < chars.len() && (chars[i] == ' ' || chars[i] == '\t') {
                if chars[i] == '\t' {
                    return Err(syntax(
                        Span::new(line_no, i as u32 + 1),
                        "tab in indentation",
                    ));
                }
                width += 1;
                i += 1;
            }
            // blank and comment-only lines carry no indentation
            if i == chars.len() || chars[i] == '#' {
                continue;
            }
            let span = Span::new(line_no, 1);
            let current = *indents.last().unwrap();
            if width > current {
                indents.push(width);
                out.push(Token {
                    tok: Tok::Indent,
                    span,
                });
            } else {
                while width < *indents.last().unwrap() {
                    indents.pop();
                    out.push(Token {
                        tok: Tok::Dedent,
                        span,
                    });
                }
                if width != *indents.last().unwrap() {
                    return Err(syntax(span, "inconsistent dedent"));
                }
            }
        }
        continuation = false;

        while i < chars.len() {
            let c = chars[i];
            let span = Span::new(line_no, i as u32 + 1);
            if c == ' ' || c == '\t' || c == '\r' {
                i += 1;
                continue;
            }
            if c == '#' {
                break;
            }
            if c == '\\' {
                if chars[i + 1..].iter().all(|c| c.is_whitespace()) {
                    continuation = true;
                    break;
                }
                return Err(syntax(span, "stray `\\`"));
            }
            if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
            {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text
                    .parse()
                    .map_err(|_| syntax(span, format!("malformed number `{text}`")))?;
                out.push(Token {
                    tok: Tok::Number(value),
                    span,
                });
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "for" => Tok::For,
                    "in" => Tok::In,
                    "if" => Tok::If,
                    "elif" => Tok::Elif,
                    "else" => Tok::Else,
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    _ => Tok::Ident(word),
                };
                out.push(Token { tok, span });
                continue;
            }
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('<', Some('=')) => (Tok::Le, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('=', Some('=')) => (Tok::EqEq, 2),
                ('!', Some('=')) => (Tok::Ne, 2),
                ('<', _) => (Tok::Lt, 1),
                ('>', _) => (Tok::Gt, 1),
                ('=', _) => (Tok::Assign, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                (':', _) => (Tok::Colon, 1),
                ('.', _) => (Tok::Dot, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                _ => return Err(syntax(span, format!("unexpected character `{c}`"))),
            };
            match tok {
                Tok::LParen | Tok::LBracket => depth += 1,
                Tok::RParen | Tok::RBracket => depth = depth.saturating_sub(1),
                _ => {}
            }
            out.push(Token { tok, span });
            i += len;
        }

        if depth == 0 && !continuation {
            let ends_statement = out
                .last()
                .is_some_and(|t| !matches!(t.tok, Tok::Newline | Tok::Indent | Tok::Dedent));
            if ends_statement {
                out.push(Token {
                    tok: Tok::Newline,
                    span: Span::new(line_no, chars.len() as u32 + 1),
                });
            }
        }
    }

    let end_line = source.lines().count() as u32 + 1;
    let eof = Span::new(end_line, 1);
    if out
        .last()
        .is_some_and(|t| !matches!(t.tok, Tok::Newline | Tok::Dedent))
    {
        out.push(Token {
            tok: Tok::Newline,
            span: eof,
        });
    }
    while indents.len() > 1 {
        indents.pop();
        out.push(Token {
            tok: Tok::Dedent,
            span: eof,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: eof,
    });
    Ok(out)
}
