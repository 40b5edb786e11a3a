use super::Formula;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |c: char| {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        match c {
            '(' | ')' => {
                chars.next();
                bump(c);
                let tok = if c == '(' { Tok::Open } else { Tok::Close };
                out.push(Token { tok, line: l, column: col });
            }
            ';' => {
                // comment to end of line
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    bump(c);
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                bump(c);
            }
            _ => {
                let mut atom = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                    bump(c);
                }
                out.push(Token { tok: Tok::Atom(atom), line: l, column: col });
            }
        }
    }
    out
}

const KEYWORDS: [&str; 8] = ["=", "N", "not", "and", "or", "implies", "exists", "forall"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    s: usize,
    end: (usize, usize),
}

impl Parser {
    fn syntax(&self, at: (usize, usize), message: impl Into<String>) -> Error {
        Error::Syntax {
            line: at.0,
            column: at.1,
            message: message.into(),
        }
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|t| (t.line, t.column))
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Result<Token> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.syntax(self.end, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn var(&mut self) -> Result<String> {
        let t = self.next()?;
        match t.tok {
            Tok::Atom(a) if is_identifier(&a) => Ok(a),
            Tok::Atom(a) => Err(self.syntax((t.line, t.column), format!("`{a}` is not a variable name"))),
            _ => Err(self.syntax((t.line, t.column), "expected a variable")),
        }
    }

    fn close(&mut self, head: &str) -> Result<()> {
        let at = self.here();
        match self.next()?.tok {
            Tok::Close => Ok(()),
            _ => Err(self.syntax(at, format!("expected `)` to close `{head}`"))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let open = self.next()?;
        if open.tok != Tok::Open {
            return Err(self.syntax((open.line, open.column), "expected `(`"));
        }
        let head_tok = self.next()?;
        let head = match head_tok.tok {
            Tok::Atom(a) => a,
            _ => return Err(self.syntax((head_tok.line, head_tok.column), "expected a connective")),
        };
        let at = (head_tok.line, head_tok.column);
        let f = match head.as_str() {
            "=" => {
                let a = self.var()?;
                let b = self.var()?;
                Formula::Eq(a, b)
            }
            "N" => {
                let mut vars = Vec::new();
                while matches!(self.tokens.get(self.pos), Some(Token { tok: Tok::Atom(_), .. })) {
                    vars.push(self.var()?);
                }
                if vars.len() != self.s {
                    return Err(Error::Arity {
                        line: at.0,
                        column: at.1,
                        expected: self.s,
                        found: vars.len(),
                    });
                }
                Formula::Edge(vars)
            }
            "not" => Formula::not(self.formula()?),
            "and" | "or" => {
                let mut parts = Vec::new();
                while matches!(self.tokens.get(self.pos), Some(Token { tok: Tok::Open, .. })) {
                    parts.push(self.formula()?);
                }
                if head == "and" {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                }
            }
            "implies" => {
                let a = self.formula()?;
                let b = self.formula()?;
                Formula::implies(a, b)
            }
            "exists" | "forall" => {
                let v = self.var()?;
                let body = self.formula()?;
                if head == "exists" {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                }
            }
            other => return Err(self.syntax(at, format!("unknown connective `{other}`"))),
        };
        self.close(&head)?;
        Ok(f)
    }
}

fn is_identifier(a: &str) -> bool {
    let mut chars = a.chars();
    let first_ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_');
    first_ok
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        && !KEYWORDS.contains(&a)
}

/// Parses one formula in the s-expression DSL; `s` fixes the arity of `N`.
/// Text after `;` on a line is a comment.
pub fn parse(text: &str, s: usize) -> Result<Formula> {
    let lines = text.split('\n').count();
    let last = text.rsplit('\n').next().unwrap_or("");
    let mut p = Parser {
        tokens: lex(text),
        pos: 0,
        s,
        end: (lines, last.chars().count() + 1),
    };
    let f = p.formula()?;
    if p.pos < p.tokens.len() {
        return Err(p.syntax(p.here(), "trailing input after formula"));
    }
    Ok(f)
}
