//! Parser for the form mini-language.
//!
//! ```text
//! form    := term (('+' | '-') term)*
//! term    := ['-'] factor (('*' | '^') factor)*
//! factor  := 't' '[' INT ']' | 'x' INT ['^' INT] | RATIONAL | '(' form ')' ['^' INT]
//! ```
//!
//! `^` directly after an `x` atom or a closing parenthesis and followed by
//! digits is a power; everywhere else `^` and `*` both mean the exterior
//! product. Indices are 1-based.

use std::collections::BTreeMap;

use rumin_core::forms::{wedge_sign, Mask};
use rumin_core::poly::Poly;
use rumin_core::rational::{parse_rational, Rational};
use rumin_core::PolyForm;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("form parse error at position {position}: {message}")]
pub struct FormParseError {
    pub position: usize,
    pub message: String,
}

/// Parsed form plus any non-fatal warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub form: PolyForm,
    pub warnings: Vec<String>,
}

/// Homogeneous-degree sum of `poly · θ^J` terms.
#[derive(Clone, Debug)]
struct Value {
    degree: usize,
    terms: BTreeMap<Mask, Poly>,
}

impl Value {
    fn scalar(p: Poly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(0, p);
        }
        Value { degree: 0, terms }
    }

    fn add(mut self, other: Value, sign: i64, pos: usize) -> Result<Value, FormParseError> {
        // the zero polynomial carries no degree information
        let self_zero = self.terms.is_empty() && self.degree == 0;
        let other_zero = other.terms.is_empty() && other.degree == 0;
        if self.degree != other.degree && !self_zero && !other_zero {
            return Err(FormParseError {
                position: pos,
                message: format!("cannot add forms of degree {} and {}", self.degree, other.degree),
            });
        }
        if self_zero {
            self.degree = other.degree;
        }
        let c = Rational::from_integer(sign.into());
        for (m, p) in other.terms {
            let e = self.terms.entry(m).or_default();
            e.add_scaled(&p, &c);
            if e.is_zero() {
                self.terms.remove(&m);
            }
        }
        Ok(self)
    }

    fn wedge(&self, other: &Value) -> Value {
        let mut terms: BTreeMap<Mask, Poly> = BTreeMap::new();
        for (ma, pa) in &self.terms {
            for (mb, pb) in &other.terms {
                if let Some(s) = wedge_sign(*ma, *mb) {
                    let p = pa.mul(pb);
                    let e = terms.entry(ma | mb).or_default();
                    e.add_assign(&if s > 0 { p } else { p.neg() });
                }
            }
        }
        terms.retain(|_, p| !p.is_zero());
        Value {
            degree: self.degree + other.degree,
            terms,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    max_index: usize,
    warnings: Vec<String>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormParseError> {
        Err(FormParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), FormParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn index(&mut self) -> Result<usize, FormParseError> {
        let at = self.pos;
        let Some(d) = self.digits() else {
            return self.err("expected an index");
        };
        let i: usize = d.parse().map_err(|_| FormParseError {
            position: at,
            message: "index out of range".into(),
        })?;
        if i == 0 || i > self.max_index {
            return Err(FormParseError {
                position: at,
                message: format!("index {i} outside 1..{}", self.max_index),
            });
        }
        Ok(i - 1)
    }

    /// `^` followed by digits, consumed only in power position.
    fn power(&mut self) -> Option<u32> {
        let save = self.pos;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if let Some(d) = self.digits() {
                if let Ok(e) = d.parse() {
                    return Some(e);
                }
            }
        }
        self.pos = save;
        None
    }

    fn form(&mut self) -> Result<Value, FormParseError> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let t = self.term()?;
            acc = acc.add(t, sign, at)?;
        }
    }

    fn term(&mut self) -> Result<Value, FormParseError> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.factor()?;
        while let Some(b'*' | b'^') = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            let prod = acc.wedge(&f);
            if prod.terms.is_empty() && !acc.terms.is_empty() && !f.terms.is_empty() {
                self.warnings.push(format!("repeated covector factor near position {}; the term is zero", self.pos));
            }
            acc = prod;
        }
        if negate {
            acc = Value::scalar(Poly::zero()).add(acc, -1, self.pos)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value, FormParseError> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                self.expect(b'[')?;
                let i = self.index()?;
                self.expect(b']')?;
                if i >= 32 {
                    return self.err("covector index too large");
                }
                let mut terms = BTreeMap::new();
                terms.insert(1 << i, Poly::one());
                Ok(Value { degree: 1, terms })
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.index()?;
                let e = self.power().unwrap_or(1);
                Ok(Value::scalar(Poly::var(i).pow(e)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.form()?;
                self.expect(b')')?;
                match self.power() {
                    Some(e) if inner.degree == 0 => {
                        let p = inner.terms.get(&0).cloned().unwrap_or_default();
                        Ok(Value::scalar(p.pow(e)))
                    }
                    Some(_) => self.err("only degree-zero expressions can be raised to a power"),
                    None => Ok(inner),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let num = self.digits().expect("digit present").to_string();
                let mut text = num;
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let Some(den) = self.digits() else {
                        return self.err("expected a denominator");
                    };
                    text = format!("{text}/{den}");
                }
                let r = parse_rational(&text).ok_or(FormParseError {
                    position: at,
                    message: format!("invalid rational '{text}'"),
                })?;
                Ok(Value::scalar(Poly::constant(r)))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a form on a group of dimension `dim`.
pub fn parse_form(text: &str, dim: usize) -> Result<Parsed, FormParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        max_index: dim,
        warnings: Vec::new(),
    };
    let v = p.form()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    let mut form = PolyForm::zero(dim, v.degree);
    for (m, f) in &v.terms {
        form.add_term(*m, f);
    }
    Ok(Parsed {
        form,
        warnings: p.warnings,
    })
}

/// Grammar summary shown with parse errors.
pub const GRAMMAR: &str = "form := term (('+'|'-') term)*; term := [coeff '*'] factor ('^' factor)*; \
factor := t[i] | x<i>[^k] | p/q | '(' form ')'[^k]";
