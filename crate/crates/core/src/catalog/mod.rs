//! Closed-form functions under test, their odd/even parts, Pexider triples
//! and control functions.

mod control;
mod function;

pub use control::{estimate_alpha, eval_phi, AlphaEstimate, ControlFunction, DEGENERATE_PHI};
pub use function::{
    eval_function, even_part, odd_part, EvaluatedFunction, EvenPart, FunctionSpec,
    InnerProductVariant, Matrix, OddPart, PexiderTriple, VectorMap,
};
