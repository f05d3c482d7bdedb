//! Exact construction and auditing of genus-zero geometric Goppa codes.

pub mod audit;
pub mod cli;
pub mod code;
pub mod field;
pub mod level;
pub mod linalg;
pub mod moduli;
pub mod pluecker;
pub mod wire;
