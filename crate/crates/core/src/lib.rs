//! Extremal multilinear forms and the constants of mixed Littlewood and
//! Bohnenblust–Hille inequalities.
//!
//! * [`forms`]: sparse integer m-linear forms and the extremal families `T_m`, `L_m`.
//! * [`mixednorm`]: nested mixed `(q_1, …, q_m)`-norms, float and exact dyadic.
//! * [`opnorm`]: exact sup norms by sign enumeration.
//! * [`constants`]: Gamma, Khinchine constants and the derived bounds.
//! * [`interp`]: hull certificates, anchor conditions and the 3-linear families.

pub mod constants;
pub mod error;
pub mod forms;
pub mod interp;
mod lp;
pub mod mixednorm;
pub mod opnorm;
pub mod rational;

pub use error::{Error, Result};
