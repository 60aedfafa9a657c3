//! Recursive-descent reader for comma-separated polynomial components.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := unary ('*' unary)*`,
//! `unary := '-' unary | power`, `power := atom ('^' int)?`,
//! `atom := number ('/' number)? | variable | '(' expr ')'`.

use num_bigint::BigInt;

use super::GermError;
use crate::exact::{MultiPoly, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, GermError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Num(s.parse().expect("digit run"))));
            i = j;
        } else if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_alphanumeric() {
                j += 1;
            }
            out.push((pos, Tok::Ident(chars[i..j].iter().map(|x| x.1).collect())));
            i = j;
        } else if "+-*/^(),".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(GermError::Syntax {
                position: pos,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Maps identifiers to variable positions: `x, y, z` or `x1..xn`, never mixed.
fn variable_index(name: &str) -> Option<(bool, usize)> {
    match name {
        "x" => Some((false, 0)),
        "y" => Some((false, 1)),
        "z" => Some((false, 2)),
        _ => {
            let idx: usize = name.strip_prefix('x')?.parse().ok()?;
            (idx >= 1 && !name[1..].starts_with('0')).then_some((true, idx - 1))
        }
    }
}

pub(super) fn default_variables(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn indexed_variables(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    at: usize,
    end: usize,
    vars: &'a [String],
    index: &'a dyn Fn(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, GermError> {
        Err(GermError::Syntax {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, GermError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, GermError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, GermError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly, GermError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(e)) => {
                    let e: u32 = match e.try_into() {
                        Ok(e) => e,
                        Err(_) => return self.err("exponent too large"),
                    };
                    self.at += 1;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, GermError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                let mut value = Rational::from_integer(n);
                if self.peek() == Some(&Tok::Op('/')) {
                    if let Some((_, Tok::Num(d))) = self.toks.get(self.at + 1) {
                        if d == &BigInt::from(0) {
                            self.at += 1;
                            return self.err("zero denominator");
                        }
                        value /= Rational::from_integer(d.clone());
                        self.at += 2;
                    }
                }
                Ok(MultiPoly::constant(self.vars.to_vec(), value))
            }
            Some(Tok::Ident(name)) => match (self.index)(&name) {
                Some(i) => {
                    self.at += 1;
                    Ok(MultiPoly::var(self.vars.to_vec(), &self.vars[i]))
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Some(Tok::Op('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of component"),
        }
    }
}

/// Parses the components and returns them over the inferred variables.
pub(super) fn parse_components(text: &str) -> Result<(Vec<String>, Vec<MultiPoly>), GermError> {
    let toks = tokenize(text)?;
    let mut indexed = None;
    let mut n = 0;
    for (pos, t) in &toks {
        if let Tok::Ident(name) = t {
            let Some((style, i)) = variable_index(name) else {
                return Err(GermError::Syntax {
                    position: *pos,
                    message: format!("unknown variable `{name}`"),
                });
            };
            if *indexed.get_or_insert(style) != style {
                return Err(GermError::Syntax {
                    position: *pos,
                    message: "cannot mix x,y,z with x1..xn".to_string(),
                });
            }
            n = n.max(i + 1);
        }
    }
    let vars = if indexed == Some(true) {
        indexed_variables(n)
    } else {
        default_variables(n)
    };
    let index = |name: &str| variable_index(name).map(|(_, i)| i);

    let mut components = Vec::new();
    let mut start = 0;
    let mut depth = 0i32;
    let mut pieces = Vec::new();
    for (k, (_, t)) in toks.iter().enumerate() {
        match t {
            Tok::Op('(') => depth += 1,
            Tok::Op(')') => depth -= 1,
            Tok::Op(',') if depth == 0 => {
                pieces.push((start, k));
                start = k + 1;
            }
            _ => {}
        }
    }
    pieces.push((start, toks.len()));
    for (lo, hi) in pieces {
        let end = toks.get(hi).map_or(text.len(), |t| t.0);
        let mut p = Parser {
            toks: &toks[..hi],
            at: lo,
            end,
            vars: &vars,
            index: &index,
        };
        if lo == hi {
            return p.err("empty component");
        }
        let poly = p.expr()?;
        if p.at != hi {
            return p.err("unexpected token");
        }
        components.push(poly);
    }
    Ok((vars, components))
}
