//! Exact arithmetic and classification tools for torsion of elliptic curves
//! over quadratic fields.

pub mod arith;
pub mod classify;
pub mod cli;
pub mod density;
pub mod ellcurve;
pub mod ffield;
pub mod field;
pub mod genus2;
pub mod modcurves;
pub mod poly;
pub mod qfield;
