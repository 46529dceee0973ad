//! The limiting spectral law `μ = ν ⊠ σ_sc` of the normalized adjacency
//! matrix, for a mean-one degree law `ν`.
//!
//! Everything is driven by one scalar fixed point. For `z` in the upper
//! half-plane, `g(z)` is the unique solution with `Im g > 0` of
//!
//! ```text
//! g = -E[ D / (z + g D) ],     D ~ ν
//! ```
//!
//! `g` is the Stieltjes transform of the symmetric law `μ̃`, whose image
//! under `x -> x²` is a Marchenko–Pastur type law `μ_MP` with transform
//! `h(z²) = g(z) / z`. The transform of `μ` itself is
//! `f(z) = -(1 + g(z)²) / z`, and on the real line
//!
//! ```text
//! ρ_MP(x) = Im h(x) / π,    ρ̃(x) = |x| ρ_MP(x²),    ρ(x) = -2 Re h(x²) ρ̃(x).
//! ```

mod density;
mod quantize;
mod stieltjes;

pub use density::{
    density_curve, density_mp, density_mu, density_tilde, mp_point, mu_atom_at_zero, DensityCurve,
    MpPoint,
};
pub use quantize::{quantize_measure, DEFAULT_QUANTIZATION};
pub use stieltjes::{solve_g, stieltjes_mu, transform_h, SolverOptions, StieltjesSolution};
