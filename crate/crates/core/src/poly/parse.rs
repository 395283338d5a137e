//! Text format for polynomial maps.
//!
//! ```text
//! vars:2
//! f1 = x1 + 3*x1^3*x2
//! f2 = (t+1)*x2
//! ```
//!
//! Statements are separated by newlines or `;`. Coefficients are integers
//! (reduced mod p) or a parenthesised polynomial in `t`, the class of the
//! modulus variable. `#` starts a comment running to the end of the line.

use std::sync::Arc;

use super::{ExponentVector, PolyError, PolyMap, SparsePoly};
use crate::gf::{Elem, Field};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
    Colon,
    Sep,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, PolyError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, cc) = (line, col);
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '=' => Some(Tok::Eq),
            ':' => Some(Tok::Colon),
            ';' | '\n' => Some(Tok::Sep),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            out.push(Token { tok, line: l, col: cc });
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c.is_ascii_digit() || c.is_ascii_alphabetic() {
            let mut s = String::new();
            let numeric = c.is_ascii_digit();
            while let Some(&d) = chars.peek() {
                let ok = if numeric {
                    d.is_ascii_digit()
                } else {
                    d.is_ascii_alphanumeric() || d == '_'
                };
                if !ok {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            let tok = if numeric { Tok::Int(s) } else { Tok::Ident(s) };
            out.push(Token { tok, line: l, col: cc });
            continue;
        }
        return Err(PolyError::Syntax {
            line,
            col,
            msg: format!("unexpected character `{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    field: &'a Field,
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, tok: &Token, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax {
            line: tok.line,
            col: tok.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, PolyError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            self.error(&t, format!("expected {what}"))
        }
    }

    fn skip_seps(&mut self) {
        while self.peek().tok == Tok::Sep {
            self.next();
        }
    }

    fn int_mod_p(&self, digits: &str) -> Elem {
        let p = self.field.characteristic();
        let r = digits
            .bytes()
            .fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
        self.field.from_int(r as i64)
    }

    fn small_int(&mut self, what: &str) -> Result<u32, PolyError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(s) => s.parse::<u32>().or_else(|_| self.error(&t, format!("{what} too large"))),
            _ => self.error(&t, format!("expected {what}")),
        }
    }

    fn var_index(&self, tok: &Token, name: &str) -> Result<usize, PolyError> {
        let idx = name
            .strip_prefix('x')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| i >= 1 && i <= self.nvars && !name[1..].starts_with('0'));
        idx.map(|i| i - 1).ok_or_else(|| PolyError::UnknownVariable {
            name: name.to_string(),
            line: tok.line,
            col: tok.col,
        })
    }

    fn parse_file(&mut self) -> Result<Vec<SparsePoly>, PolyError> {
        self.skip_seps();
        let head = self.next();
        if head.tok != Tok::Ident("vars".into()) {
            return self.error(&head, "expected header `vars:<n>`");
        }
        self.expect(Tok::Colon, "`:`")?;
        let n_tok = self.peek().clone();
        let n = self.small_int("variable count")? as usize;
        if n == 0 {
            return self.error(&n_tok, "variable count must be positive");
        }
        self.nvars = n;
        let mut components = Vec::new();
        loop {
            self.skip_seps();
            let t = self.next();
            match &t.tok {
                Tok::End => break,
                Tok::Ident(name) => {
                    let expected = format!("f{}", components.len() + 1);
                    if *name != expected {
                        return self.error(&t, format!("expected component `{expected}`"));
                    }
                    self.expect(Tok::Eq, "`=`")?;
                    components.push(self.parse_expr()?);
                    let after = self.peek().clone();
                    if !matches!(after.tok, Tok::Sep | Tok::End) {
                        return self.error(&after, "expected end of component");
                    }
                }
                _ => return self.error(&t, "expected a component `f<i> = ...`"),
            }
        }
        Ok(components)
    }

    fn parse_expr(&mut self) -> Result<SparsePoly, PolyError> {
        let mut acc = SparsePoly::zero(self.nvars);
        let mut negate = false;
        if self.peek().tok == Tok::Minus {
            self.next();
            negate = true;
        }
        loop {
            let term = self.parse_term()?;
            let term = if negate {
                term.scale(self.field, self.field.neg(Elem::ONE))
            } else {
                term
            };
            acc = acc.add(self.field, &term);
            match self.peek().tok {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                _ => break,
            }
            self.next();
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<SparsePoly, PolyError> {
        let t = self.peek().clone();
        let coef = match &t.tok {
            Tok::Int(s) => {
                let s = s.clone();
                self.next();
                Some(self.int_mod_p(&s))
            }
            Tok::LParen => {
                self.next();
                let c = self.parse_t_poly()?;
                self.expect(Tok::RParen, "`)`")?;
                Some(c)
            }
            Tok::Ident(_) => None,
            _ => return self.error(&t, "expected a term"),
        };
        let exps = match coef {
            Some(_) if self.peek().tok == Tok::Star => {
                self.next();
                self.parse_powprod()?
            }
            Some(_) => ExponentVector::zero(self.nvars),
            None => self.parse_powprod()?,
        };
        Ok(SparsePoly::monomial(exps, coef.unwrap_or(Elem::ONE)))
    }

    fn parse_powprod(&mut self) -> Result<ExponentVector, PolyError> {
        let mut exps = vec![0u32; self.nvars];
        loop {
            let t = self.next();
            let Tok::Ident(name) = &t.tok else {
                return self.error(&t, "expected a variable");
            };
            let i = self.var_index(&t, name)?;
            let d = if self.peek().tok == Tok::Caret {
                self.next();
                self.small_int("exponent")?
            } else {
                1
            };
            exps[i] = exps[i].checked_add(d).ok_or_else(|| PolyError::Syntax {
                line: t.line,
                col: t.col,
                msg: "exponent overflow".into(),
            })?;
            if self.peek().tok != Tok::Star {
                break;
            }
            self.next();
        }
        Ok(ExponentVector::new(exps))
    }

    /// `c t^k (± c t^k)*` evaluated in the field.
    fn parse_t_poly(&mut self) -> Result<Elem, PolyError> {
        let field = self.field;
        let t_elem = field.generator();
        let mut acc = Elem::ZERO;
        let mut negate = false;
        if self.peek().tok == Tok::Minus {
            self.next();
            negate = true;
        }
        loop {
            let tok = self.next();
            let (coef, has_t) = match &tok.tok {
                Tok::Int(s) => {
                    let c = self.int_mod_p(&s.clone());
                    if self.peek().tok == Tok::Star {
                        self.next();
                        let tt = self.next();
                        if tt.tok != Tok::Ident("t".into()) {
                            return self.error(&tt, "expected `t`");
                        }
                        (c, true)
                    } else {
                        (c, false)
                    }
                }
                Tok::Ident(s) if s == "t" => (Elem::ONE, true),
                _ => return self.error(&tok, "expected a coefficient polynomial in `t`"),
            };
            let power = if has_t {
                if self.peek().tok == Tok::Caret {
                    self.next();
                    self.small_int("exponent")? as u64
                } else {
                    1
                }
            } else {
                0
            };
            let mut term = field.mul(coef, field.pow(t_elem, power));
            if negate {
                term = field.neg(term);
            }
            acc = field.add(acc, term);
            match self.peek().tok {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                _ => break,
            }
            self.next();
        }
        Ok(acc)
    }
}

/// Parses a map in the text format above over `field`.
pub fn parse_map(text: &str, field: Arc<Field>) -> Result<PolyMap, PolyError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        field: &field,
        nvars: 0,
    };
    let components = parser.parse_file()?;
    let nvars = parser.nvars;
    if components.len() != nvars {
        return Err(PolyError::ComponentCountMismatch {
            vars: nvars,
            components: components.len(),
        });
    }
    PolyMap::new(field, components)
}
