//! Recursive-descent parser for field expressions.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := ['-'] (rational | 'sqrt' '(' integer ')' | '(' expr ')')
//! rational := integer ['/' integer]
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{FieldElement, MQField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("sqrt of non-positive integer {value} at position {pos}")]
    NonPositiveSqrt { pos: usize, value: String },
    #[error("radicand {radicand} is outside the field {field}")]
    OutsideField { radicand: u64, field: String },
}

impl ExprError {
    pub fn position(&self) -> Option<usize> {
        match self {
            Self::Syntax { pos, .. }
            | Self::DivisionByZero { pos }
            | Self::NonPositiveSqrt { pos, .. } => Some(*pos),
            Self::OutsideField { .. } => None,
        }
    }
}

/// Parses an expression into the compositum of all multiquadratic fields.
pub fn parse_expr(text: &str) -> Result<FieldElement, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

/// Parses an expression that must lie in `field`.
pub fn parse_field_expr(text: &str, field: &MQField) -> Result<FieldElement, ExprError> {
    let x = parse_expr(text)?;
    let outside = x.radicands().find(|&n| !field.contains_radicand(n));
    match outside {
        None => Ok(x),
        Some(radicand) => Err(ExprError::OutsideField {
            radicand,
            field: field.to_string(),
        }),
    }
}

/// Parses an expression, enlarging `field` with any new radicands.
pub fn parse_field_expr_extending(
    text: &str,
    field: &mut MQField,
) -> Result<FieldElement, ExprError> {
    let x = parse_expr(text)?;
    if !field.contains(&x) {
        *field = field.extended_with(x.radicands());
    }
    Ok(x)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
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

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<FieldElement, ExprError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement, ExprError> {
        let mut acc = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let op_pos = self.pos;
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if op == b'*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs)
                    .map_err(|_| ExprError::DivisionByZero { pos: op_pos })?
            };
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FieldElement, ExprError> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let value = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                FieldElement::from_rational(BigRational::from_integer(self.integer()?))
            }
            Some(b's') => self.sqrt()?,
            Some(_) => return Err(self.error("expected a number, sqrt(...) or '('")),
            None => return Err(self.error("unexpected end of input")),
        };
        Ok(if negate { -value } else { value })
    }

    fn sqrt(&mut self) -> Result<FieldElement, ExprError> {
        if !self.src[self.pos..].starts_with(b"sqrt") {
            return Err(self.error("expected 'sqrt'"));
        }
        self.pos += 4;
        self.expect(b'(')?;
        let arg_pos = {
            self.skip_ws();
            self.pos
        };
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(self.error("sqrt takes an integer argument"));
        }
        let n = self.integer()?;
        self.expect(b')')?;
        if negative || n.is_zero() {
            let value = if negative { -n } else { n };
            return Err(ExprError::NonPositiveSqrt {
                pos: arg_pos,
                value: value.to_string(),
            });
        }
        let n = n
            .to_u64()
            .ok_or_else(|| ExprError::Syntax { pos: arg_pos, msg: "radicand too large".into() })?;
        Ok(FieldElement::sqrt_of(n).expect("positive radicand"))
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("validated digits"))
    }
}
