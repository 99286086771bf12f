//! Numerical laboratory for the Painlevé-II transition zones of the
//! Degasperis–Procesi equation u_t − u_txx + 3u_x + 4uu_x = 3u_x u_xx + u u_xxx.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airy;
pub mod asymptotics;
pub mod dpsolve;
pub mod error;
pub mod harness;
pub mod ode;
pub mod painleve;
pub mod phase;
pub mod quad;
pub mod rhmodel;
pub mod scattering;
pub mod spectral;

pub use error::{Error, Result};
