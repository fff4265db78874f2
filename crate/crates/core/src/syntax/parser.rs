//! Recursive-descent parser for the ASCII surface syntax.
//!
//! Precedence, loosest first: `<->` (left-assoc), `->` (right-assoc),
//! `|`, `&`, then the prefix operators `~ [i] <i> [[i]] <<i>>`.
//! `#` starts a comment running to the end of the line.

use std::fmt;

use thiserror::Error;

use super::formula::{Conditional, Formula, Modality, Statement};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    LBracket,
    RBracket,
    LDoubleBracket,
    RDoubleBracket,
    LAngle,
    RAngle,
    LDoubleAngle,
    RDoubleAngle,
    LParen,
    RParen,
    Twiddle,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::True => "`true`",
            Tok::False => "`false`",
            Tok::Tilde => "`~`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::Arrow => "`->`",
            Tok::DoubleArrow => "`<->`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LDoubleBracket => "`[[`",
            Tok::RDoubleBracket => "`]]`",
            Tok::LAngle => "`<`",
            Tok::RAngle => "`>`",
            Tok::LDoubleAngle => "`<<`",
            Tok::RDoubleAngle => "`>>`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Twiddle => "`|~`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

/// Syntax error with a 1-based position.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// Human-readable descriptions of the tokens that would have been accepted.
    pub expected: Vec<String>,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let at = |s: &[char], i: usize, pat: &str| {
        pat.chars()
            .enumerate()
            .all(|(k, c)| s.get(i + k) == Some(&c))
    };

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = (line, column);
        // Longest match first.
        const PUNCT: [(&str, Tok); 16] = [
            ("<->", Tok::DoubleArrow),
            ("[[", Tok::LDoubleBracket),
            ("]]", Tok::RDoubleBracket),
            ("<<", Tok::LDoubleAngle),
            (">>", Tok::RDoubleAngle),
            ("|~", Tok::Twiddle),
            ("->", Tok::Arrow),
            ("~", Tok::Tilde),
            ("&", Tok::Amp),
            ("|", Tok::Bar),
            ("[", Tok::LBracket),
            ("]", Tok::RBracket),
            ("<", Tok::LAngle),
            (">", Tok::RAngle),
            ("(", Tok::LParen),
            (")", Tok::RParen),
        ];
        if let Some((pat, tok)) = PUNCT.iter().find(|(pat, _)| at(&chars, i, pat)) {
            let n = pat.chars().count();
            i += n;
            column += n;
            out.push(Spanned {
                tok: tok.clone(),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - begin;
            let word: String = chars[begin..i].iter().collect();
            let tok = match word.as_str() {
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word),
            };
            out.push(Spanned {
                tok,
                line: start.0,
                column: start.1,
            });
            continue;
        }
        return Err(ParseError {
            line,
            column,
            message: format!("unexpected character {c:?}"),
            expected: vec![],
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const UNARY_START: &[&str] = &[
    "`~`",
    "`[`",
    "`<`",
    "`[[`",
    "`<<`",
    "`true`",
    "`false`",
    "identifier",
    "`(`",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
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
            message: format!(
                "unexpected {}, expected {}",
                here.tok,
                expected.join(" or ")
            ),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&tok.to_string()]))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn modality(&mut self, close: Tok) -> Result<Modality, ParseError> {
        let name = match self.peek() {
            Tok::Ident(name) => name.clone(),
            _ => return Err(self.error(&["modality name"])),
        };
        self.bump();
        self.expect(close)?;
        Ok(Modality::new(name).expect("lexer only yields valid identifiers"))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let m = self.modality(Tok::RBracket)?;
                Ok(Formula::Box(m, Box::new(self.unary()?)))
            }
            Tok::LAngle => {
                self.bump();
                let m = self.modality(Tok::RAngle)?;
                Ok(Formula::Dia(m, Box::new(self.unary()?)))
            }
            Tok::LDoubleBracket => {
                self.bump();
                let m = self.modality(Tok::RDoubleBracket)?;
                Ok(Formula::DefBox(m, Box::new(self.unary()?)))
            }
            Tok::LDoubleAngle => {
                self.bump();
                let m = self.modality(Tok::RDoubleAngle)?;
                Ok(Formula::DefDia(m, Box::new(self.unary()?)))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Err(self.error(UNARY_START)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => Err(self.error(&["`&`", "`|`", "`->`", "`<->`", "end of input"])),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses `formula` or `formula |~ formula`.
pub fn parse_statement(text: &str) -> Result<Statement, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let lhs = p.formula()?;
    if *p.peek() != Tok::Twiddle {
        p.finish()?;
        return Ok(Statement::Plain(lhs));
    }
    p.bump();
    let rhs = p.formula()?;
    if *p.peek() == Tok::Twiddle {
        let mut err = p.error(&["end of input"]);
        err.message = "conditionals cannot be nested: more than one `|~`".into();
        return Err(err);
    }
    p.finish()?;
    Ok(Statement::Conditional(Conditional::new(lhs, rhs)))
}
