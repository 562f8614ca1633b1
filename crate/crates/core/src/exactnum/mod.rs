//! Exact arithmetic in totally real multiquadratic number fields.

mod element;
mod field;
mod parse;
mod poly;
pub mod radical;
mod sign;

pub use element::FieldElement;
pub use field::{subfield_generated, Embedding, MQField};
pub use parse::{parse_expr, parse_field_expr, parse_field_expr_extending, ExprError};
pub use poly::{is_algebraic_integer, minimal_polynomial, RatPoly};
pub use sign::{set_start_precision, start_precision, DEFAULT_PRECISION_BITS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element involves sqrt({radicand}), which is not in {field}")]
    Mismatch { radicand: u64, field: String },
    #[error("generator {0} must be a squarefree integer greater than 1")]
    BadGenerator(u64),
    #[error("generators {0:?} are dependent modulo squares")]
    DependentGenerators(Vec<u64>),
    #[error("{0} generators is more than supported")]
    TooManyGenerators(usize),
    #[error("embedding has {got} signs, field has {expected} generators")]
    EmbeddingArity { expected: usize, got: usize },
    #[error("sqrt of non-positive value {0}")]
    NonPositiveSqrt(i64),
    #[error("radicand does not fit in 64 bits")]
    RadicandOverflow,
}

/// Checked binary field operation, as selected at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arithmetic(
    field: &MQField,
    x: &FieldElement,
    y: &FieldElement,
    op: FieldOp,
) -> Result<FieldElement, FieldError> {
    match op {
        FieldOp::Add => field.add(x, y),
        FieldOp::Sub => field.sub(x, y),
        FieldOp::Mul => field.mul(x, y),
        FieldOp::Div => field.div(x, y),
    }
}
