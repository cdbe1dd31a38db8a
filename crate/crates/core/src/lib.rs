//! Competency-question generation for first-order ontologies and
//! evaluation of theorem-prover runs over the generated corpus.

pub mod analysis;
pub mod fol;
pub mod harness;
pub mod kb;
pub mod patterns;
pub mod projection;
pub mod sexpr;
pub mod statement;

/// Version stamped into every JSON artifact the pipeline writes.
pub const FORMAT_VERSION: u32 = 1;
