//! Tropical expression grammar. `+` is min, `*` is addition.
//!
//! ```text
//! expr     := term ('+' term)*
//! term     := coef ('*' monomial)? | monomial
//! monomial := var ('^' int)? ('*' var ('^' int)?)*
//! coef     := rational | decimal | 'inf'
//! ```

use std::fmt;

use trop_core::poly::TropPolynomial;
use trop_core::rational::{parse_rational, Rational};
use trop_core::scalar::TropScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at column {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at column {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("expression has no finite terms")]
    NoFiniteTerms,
}

/// A variable raised to an integer power. `position` is the 1-based column
/// of the name and is ignored by equality.
#[derive(Debug, Clone, Eq)]
pub struct Factor {
    pub var: String,
    pub exponent: i64,
    pub position: usize,
}

impl PartialEq for Factor {
    fn eq(&self, other: &Self) -> bool {
        self.var == other.var && self.exponent == other.exponent
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    /// Absent means the unit coefficient 0.
    pub coefficient: Option<TropScalar>,
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropExpr {
    pub terms: Vec<Term>,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            1 => f.write_str(&self.var),
            e => write!(f, "{}^{e}", self.var),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(c) = &self.coefficient {
            parts.push(c.to_string());
        }
        parts.extend(self.factors.iter().map(ToString::to_string));
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Display for TropExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        f.write_str(&terms.join(" + "))
    }
}

impl TropExpr {
    pub fn parse(text: &str) -> Result<TropExpr, ExprError> {
        Parser::new(text).expr()
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for factor in self.terms.iter().flat_map(|t| &t.factors) {
            if !seen.contains(&factor.var) {
                seen.push(factor.var.clone());
            }
        }
        seen
    }

    /// Repeated variables in a monomial add their exponents; terms with an
    /// infinite coefficient are dropped.
    pub fn to_polynomial(&self, vars: &[String]) -> Result<TropPolynomial, ExprError> {
        let mut terms = Vec::new();
        for term in &self.terms {
            let mut exponents = vec![0i64; vars.len()];
            for factor in &term.factors {
                let slot = vars.iter().position(|v| *v == factor.var).ok_or_else(|| ExprError::UnknownVariable {
                    name: factor.var.clone(),
                    position: factor.position,
                })?;
                exponents[slot] += factor.exponent;
            }
            match &term.coefficient {
                None => terms.push((exponents, Rational::from_integer(0.into()))),
                Some(TropScalar::Finite(c)) => terms.push((exponents, c.clone())),
                Some(TropScalar::Infinity) => {}
            }
        }
        TropPolynomial::new(vars.len().max(1), terms).map_err(|_| ExprError::NoFiniteTerms)
    }
}

/// Parses `text` as a polynomial in `vars`.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<TropPolynomial, ExprError> {
    TropExpr::parse(text)?.to_polynomial(vars)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.chars().collect(), pos: 0 }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { position: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn describe(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".into(),
        }
    }

    fn expr(&mut self) -> Result<TropExpr, ExprError> {
        let mut terms = vec![self.term()?];
        while self.eat('+') {
            terms.push(self.term()?);
        }
        if self.peek().is_some() {
            let found = self.describe();
            return self.error(format!("expected `+` or end of input, found {found}"));
        }
        Ok(TropExpr { terms })
    }

    fn term(&mut self) -> Result<Term, ExprError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '-' || c == '.' => {
                let coefficient = Some(TropScalar::Finite(self.number()?));
                self.rest_of_term(coefficient)
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                let name = self.ident();
                if name == "inf" {
                    return self.rest_of_term(Some(TropScalar::Infinity));
                }
                let first = self.factor_after(name, start)?;
                let mut factors = vec![first];
                while self.eat('*') {
                    factors.push(self.factor()?);
                }
                Ok(Term { coefficient: None, factors })
            }
            _ => {
                let found = self.describe();
                self.error(format!("expected a coefficient or variable, found {found}"))
            }
        }
    }

    fn rest_of_term(&mut self, coefficient: Option<TropScalar>) -> Result<Term, ExprError> {
        let mut factors = Vec::new();
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        Ok(Term { coefficient, factors })
    }

    fn factor(&mut self) -> Result<Factor, ExprError> {
        match self.peek() {
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                let name = self.ident();
                if name == "inf" {
                    self.pos = start;
                    return self.error("`inf` is only allowed as a coefficient");
                }
                self.factor_after(name, start)
            }
            _ => {
                let found = self.describe();
                self.error(format!("expected a variable, found {found}"))
            }
        }
    }

    fn factor_after(&mut self, var: String, start: usize) -> Result<Factor, ExprError> {
        let exponent = if self.eat('^') { self.integer()? } else { 1 };
        Ok(Factor { var, exponent, position: start + 1 })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        self.pos - start
    }

    fn integer(&mut self) -> Result<i64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        if self.digits() == 0 {
            return self.error("expected an integer exponent");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| {
            self.pos = start;
            self.error("exponent out of range")
        })
    }

    fn number(&mut self) -> Result<Rational, ExprError> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        let mut digits = self.digits();
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            digits += self.digits();
        }
        if digits == 0 {
            return self.error("expected digits");
        }
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            if self.digits() == 0 {
                return self.error("expected a denominator");
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_rational(&text).or_else(|e| {
            self.pos = start;
            self.error(e.0)
        })
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}
