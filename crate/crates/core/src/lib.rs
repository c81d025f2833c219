//! Finite-dimensional models of weighted convolution quasi-algebras and
//! time-frequency operator classes.
//!
//! The crate works on the discrete phase space `Z_N × Z_N` (`N` odd, prime
//! where the symplectic group is involved) and on finitely supported
//! sequences on `Z^m`:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`seq_algebra`] | `ℓ^q_{v_s}` quasi-norms, exact convolution, Neumann and Fourier inversion |
//! | [`phase_space`] | signals, time-frequency shifts, STFT, full-lattice Gabor frames |
//! | [`weyl`] | Wigner distribution, Weyl quantization and dequantization, Gabor matrices, modulation norms |
//! | [`matrix_algebra`] | diagonal envelopes, the off-diagonal decay class, pseudo-inverses |
//! | [`metaplectic`] | `SL(2, Z_N)`, generator factorization, finite metaplectic operators |
//! | [`fio`] | envelopes of generalized metaplectic operators, composition, inversion, factorization |
//! | [`amalgam`] | sampled Wiener amalgam norms on `R²` |
//! | [`cli`] | experiment configs, reports and the `gml` command runner |
//!
//! See `examples/` for one runnable walkthrough per capability.

pub mod amalgam;
pub mod cli;
pub mod error;
pub mod fft;
pub mod fio;
pub mod matrix_algebra;
pub mod metaplectic;
pub mod phase_space;
pub mod seq_algebra;
mod stats;
pub mod weyl;

pub use error::{Error, Result};
pub use num_complex::Complex64;
