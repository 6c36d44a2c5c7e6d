//! Computational experiments on two-dimensional shifts of finite type.
//!
//! The crate is organised bottom-up:
//!
//! - [`grid`]: sites, shapes and finite patterns on Z².
//! - [`sft`]: local rules, admissibility, exhaustive enumeration and gluing.
//! - [`entropy`]: Shannon entropy, finite-size and transfer-matrix bounds.
//! - [`wr`]: the Widom-Rowlinson shift, its sampler and the contour machinery
//!   behind its Peierls estimate.
//! - [`hochman`]: the hierarchical shift `X_k`, its level squares, `x_ω`
//!   windows and the relabelled shifts `Y_{m,n}`.
//! - [`factor`]: sliding block codes and the two-step factor decomposition.
//! - [`experiment`]: seeded experiments with JSON reports, used by the binary.
//!
//! Each area has a runnable program under `examples/`.

pub mod entropy;
pub mod experiment;
pub mod factor;
pub mod grid;
pub mod hochman;
pub mod sft;
pub mod wr;
