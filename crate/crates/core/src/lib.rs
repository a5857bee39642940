//! Fourier expansions of half-integral weight modular forms on `Gamma_0(4)`.
//!
//! Three explicit bases are provided, each assembled from theta, Eisenstein
//! and Cohen-Eisenstein series by fast truncated power-series arithmetic:
//!
//! * the Cohen standard basis `theta^a F_2^b` of the full space `M_{k+1/2}(4)`;
//! * the Kohnen basis of the plus-space `M^+_{k+1/2}(4)` built from
//!   `E_4(4z)`, `E_6(4z)`, theta and `H_{5/2}, H_{7/2}, H_{11/2}`;
//! * the Rankin-Cohen basis of brackets `[E(z or 4z), theta]_n`.
//!
//! On top of these sit plus-space extraction, Hecke operators `T(p^2)` with
//! eigenform extraction, and a benchmark harness with power-law fitting.

pub mod arith;
pub mod bases;
pub mod bench;
pub mod error;
pub mod fit;
pub mod forms;
pub mod hecke;
pub mod io;
pub mod linalg;
pub mod numth;
pub mod ring;
pub mod series;

pub use bases::{
    cohen_basis, dim_full, dim_plus, is_plus, kohnen_basis, plus_project, rankin_cohen_basis,
    rc_bracket, Construction, Flavor, FormBasis,
};
pub use error::{Error, Result};
pub use forms::{HalfWeight, LabeledForm, Weight};
pub use ring::{CoeffRing, RingElem};
pub use series::QExpansion;
