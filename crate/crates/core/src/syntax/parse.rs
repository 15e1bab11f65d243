//! Concrete syntax.
//!
//! ```text
//! formula  ::= with [ "-o" formula ]        (left side must be an atom)
//! with     ::= tensor [ "&" with ]
//! tensor   ::= unary [ "*" tensor ]
//! unary    ::= "!" unary | atom | "1" | "top" | "(" formula ")"
//! context  ::= "." | formula { "," formula }
//! state    ::= context ";" context
//! sequent  ::= state "|-" formula
//! ```
//!
//! The unicode spellings `⊗ ⊸ ⊤ ⊢ ·` are accepted as aliases.

use std::fmt;

use thiserror::Error;

use super::formula::{is_atom_name, Atom, Formula};
use super::state::{RawState, Sequent, State};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}; expected one of: {}", expected.join(", "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    One,
    Top,
    Star,
    Amp,
    Lolli,
    Bang,
    LParen,
    RParen,
    Semi,
    Comma,
    Turnstile,
    Dot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::One => f.write_str("`1`"),
            Tok::Top => f.write_str("`top`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Lolli => f.write_str("`-o`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut advance = 1;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '*' | '⊗' => Tok::Star,
            '&' => Tok::Amp,
            '!' => Tok::Bang,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '.' | '·' => Tok::Dot,
            '1' => Tok::One,
            '⊤' => Tok::Top,
            '⊸' => Tok::Lolli,
            '⊢' => Tok::Turnstile,
            '-' if chars.get(i + 1) == Some(&'o') => {
                advance = 2;
                Tok::Lolli
            }
            '|' if chars.get(i + 1) == Some(&'-') => {
                advance = 2;
                Tok::Turnstile
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                advance = j - i;
                if word == "top" {
                    Tok::Top
                } else if is_atom_name(&word) {
                    Tok::Ident(word)
                } else {
                    return Err(ParseError {
                        line: start_line,
                        column: start_col,
                        message: format!("`{word}` is not a valid atom name (must start lowercase)"),
                        expected: vec!["atom".into()],
                    });
                }
            }
            other => {
                return Err(ParseError {
                    line: start_line,
                    column: start_col,
                    message: format!("unexpected character `{other}`"),
                    expected: vec!["formula".into()],
                })
            }
        };
        out.push(Spanned { tok, line: start_line, column: start_col });
        i += advance;
        col += advance;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const FORMULA_START: &[&str] = &["atom", "`1`", "`top`", "`!`", "`(`"];

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            message: format!("unexpected {}", here.tok),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let start = self.toks[self.pos].clone();
        let lhs = self.with()?;
        if *self.peek() != Tok::Lolli {
            return Ok(lhs);
        }
        let Formula::Atom(a) = lhs else {
            return Err(ParseError {
                line: start.line,
                column: start.column,
                message: "the left side of `-o` must be an atom".into(),
                expected: vec!["atom".into()],
            });
        };
        self.bump();
        let body = self.formula()?;
        Ok(Formula::lolli(a, body))
    }

    fn with(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.tensor()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.with()?;
            return Ok(Formula::with(lhs, rhs));
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.tensor()?;
            return Ok(Formula::tensor(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::bang(self.unary()?))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(Atom::new(&name).expect("lexer checked atom name")))
            }
            Tok::One => {
                self.bump();
                Ok(Formula::One)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.error(FORMULA_START)),
        }
    }

    fn context(&mut self) -> Result<Vec<Formula>, ParseError> {
        if *self.peek() == Tok::Dot {
            self.bump();
            return Ok(Vec::new());
        }
        if !matches!(self.peek(), Tok::Ident(_) | Tok::One | Tok::Top | Tok::Bang | Tok::LParen) {
            let mut exp = vec!["`.`"];
            exp.extend_from_slice(FORMULA_START);
            return Err(self.error(&exp));
        }
        let mut items = vec![self.formula()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.formula()?);
        }
        Ok(items)
    }

    fn raw_state(&mut self) -> Result<RawState, ParseError> {
        let gamma = self.context()?;
        self.expect(Tok::Semi, "`;`")?;
        let delta = self.context()?;
        Ok(RawState { gamma, delta })
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses `G1, G2 ; D1, D2` (either side may be `.`), canonicalizing.
pub fn parse_state(text: &str) -> Result<State, ParseError> {
    parse_raw_state(text).map(|r| r.canonicalize())
}

pub fn parse_raw_state(text: &str) -> Result<RawState, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.raw_state()?;
    p.finish()?;
    Ok(raw)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.raw_state()?;
    p.expect(Tok::Turnstile, "`|-`")?;
    let goal = p.formula()?;
    p.finish()?;
    Ok(Sequent::new(raw.canonicalize(), goal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn leaves_and_precedence() {
        assert_eq!(parse_formula("a").unwrap(), a("a"));
        assert_eq!(
            parse_formula("a -o (b & 1)").unwrap(),
            Formula::lolli(Atom::new("a").unwrap(), Formula::with(a("b"), Formula::One))
        );
        assert_eq!(
            parse_formula("!a * top").unwrap(),
            Formula::tensor(Formula::bang(a("a")), Formula::Top)
        );
        // `*` binds tighter than `&`, which binds tighter than `-o`.
        assert_eq!(
            parse_formula("a -o b * c & d").unwrap(),
            Formula::lolli(
                Atom::new("a").unwrap(),
                Formula::with(Formula::tensor(a("b"), a("c")), a("d"))
            )
        );
        assert_eq!(
            parse_formula("a * b * c").unwrap(),
            Formula::tensor(a("a"), Formula::tensor(a("b"), a("c")))
        );
        assert_eq!(parse_formula("a ⊸ ⊤ ⊗ 1").unwrap(), parse_formula("a -o top * 1").unwrap());
    }

    #[test]
    fn states_and_sequents() {
        assert_eq!(parse_state(". ; a, a").unwrap(), State::linear([a("a"), a("a")]));
        assert_eq!(parse_state("a ; .").unwrap(), State::new([a("a")], []));
        assert_eq!(parse_state("a, a ; b").unwrap(), State::new([a("a")], [a("b")]));
        let s = parse_sequent(". ; . |- a -o a").unwrap();
        assert!(s.context.is_empty());
        assert_eq!(s.goal, parse_formula("a -o a").unwrap());
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let e = parse_formula("a * ").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        assert!(e.expected.iter().any(|x| x == "atom"));

        let e = parse_formula("(a * b) -o c").unwrap_err();
        assert!(e.message.contains("must be an atom"));

        let e = parse_state("a\n b").unwrap_err();
        assert_eq!((e.line, e.column), (2, 2));
        assert_eq!(e.expected, vec!["`;`".to_string()]);

        assert!(parse_formula("Abc").is_err());
        assert!(parse_formula("a b").is_err());
        assert!(parse_sequent("; a |- a").is_err());
    }
}
