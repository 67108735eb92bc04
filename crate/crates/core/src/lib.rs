//! Exact computer algebra for the algebra of unitarily invariant valuations on
//! `C^n` and the module of unitarily invariant area measures over it.
//!
//! Everything is computed over [`scalars::PiScalar`], rational Laurent
//! polynomials in a formal `pi`; nothing is ever approximated.
//!
//! * [`poly`]: graded polynomials in `(s,t)` and `(t,u)` and the generating
//!   function families `f_k`, `p_k`, `q_k`.
//! * [`valalg`]: the valuation algebra in the hermitian intrinsic volume basis.
//! * [`areamod`]: area measures, the module action, and the presentation.
//! * [`forms`]: invariant differential forms, used as an independent oracle
//!   for the `t_hat` structure constants.

pub mod areamod;
pub mod error;
pub mod expr;
pub mod forms;
pub mod linalg;
pub mod poly;
pub mod scalars;
pub mod table;
pub mod valalg;
pub mod verify;

pub use error::{Error, Result};
pub use scalars::{omega, PiScalar, Rational};
