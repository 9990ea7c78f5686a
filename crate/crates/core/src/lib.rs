//! # pbits
//!
//! Numerics for random private states and independent bits.
//!
//! The crate is organised bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`randmat`] | Seeded samplers: Ginibre, Wishart, Haar unitaries (phase-corrected QR), Hilbert-Schmidt and separable states |
//! | [`qlinalg`] | Dense Hermitian algebra on multipartite systems: partial trace/transpose, polar, entropies |
//! | [`states`] | Private states, key-attacked states, Bell-block decompositions, independent bits |
//! | [`entropics`] | Relative, sandwiched Rényi, max and hypothesis-testing divergences; relaxed key/repeater bounds; rate regions |
//! | [`experiments`] | Seeded Monte Carlo experiment harness with CSV/JSON output |
//!
//! ## Conventions
//!
//! All logarithms are base 2, so every entropy and divergence is in bits.
//! Multipartite operators use row-major subsystem ordering: for dims
//! `[d0, d1, ..., dk]` the basis state `|i0 i1 ... ik>` has linear index
//! `((i0 * d1 + i1) * d2 + i2) ...`, which matches the Kronecker product
//! `A ⊗ B ⊗ ...`. Private states are laid out `A, B, A', B'`; independent
//! bits `A, A', B'`.
//!
//! ## Quick start
//!
//! ```no_run
//! use pbits::randmat::RandomStream;
//! use pbits::states::random_pbit;
//!
//! let stream = RandomStream::new(7, "demo", 0);
//! let pbit = random_pbit(4, &stream).unwrap();
//! let info = pbit.mutual_information().unwrap();
//! println!("I(AA':BB') = {info:.4} bits");
//! ```

pub mod entropics;
pub mod error;
pub mod experiments;
pub mod qlinalg;
pub mod randmat;
pub mod states;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = faer::c64;

/// Dense complex matrix.
pub type ComplexMatrix = faer::Mat<C64>;
