//! Tokenizer for the presentation language.

use super::ast::Pos;
use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokKind {
    Ident(String),
    Str(String),
    Int(u64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Star,
    Caret,
    Plus,
    Minus,
    Eq,
    Arrow,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Tok {
    pub kind: TokKind,
    pub pos: Pos,
}

pub fn lex(text: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    loop {
        let pos = Pos { line, col };
        let Some(&c) = chars.peek() else {
            toks.push(Tok {
                kind: TokKind::Eof,
                pos,
            });
            return Ok(toks);
        };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match chars.peek() {
                        None | Some('\n') => {
                            return Err(ParseError::new(
                                pos,
                                ParseErrorKind::Syntax,
                                "unterminated string",
                            ))
                        }
                        Some('"') => {
                            bump!();
                            break;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            bump!();
                        }
                    }
                }
                toks.push(Tok {
                    kind: TokKind::Str(s),
                    pos,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_')
                {
                    s.push(bump!().expect("peeked"));
                }
                toks.push(Tok {
                    kind: TokKind::Ident(s),
                    pos,
                });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| c.is_ascii_digit()) {
                    s.push(bump!().expect("peeked"));
                }
                let n: u64 = s.parse().map_err(|_| {
                    ParseError::new(pos, ParseErrorKind::DegreeOverflow, "integer too large")
                })?;
                toks.push(Tok {
                    kind: TokKind::Int(n),
                    pos,
                });
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    toks.push(Tok {
                        kind: TokKind::Arrow,
                        pos,
                    });
                } else {
                    toks.push(Tok {
                        kind: TokKind::Minus,
                        pos,
                    });
                }
            }
            _ => {
                let kind = match c {
                    '{' => TokKind::LBrace,
                    '}' => TokKind::RBrace,
                    '(' => TokKind::LParen,
                    ')' => TokKind::RParen,
                    ':' => TokKind::Colon,
                    ';' => TokKind::Semi,
                    '*' => TokKind::Star,
                    '^' => TokKind::Caret,
                    '+' => TokKind::Plus,
                    '=' => TokKind::Eq,
                    other => {
                        return Err(ParseError::new(
                            pos,
                            ParseErrorKind::Syntax,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                };
                bump!();
                toks.push(Tok { kind, pos });
            }
        }
    }
}
