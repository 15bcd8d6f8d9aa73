//! Dynamics and spectral analysis of internal waves in 2D domains.
//!
//! The library follows the classical pipeline for the Poincaré problem
//! (∂²_t Δ + ∂²_{x₂})u = f cos(λ₀t) on a bounded domain:
//!
//! - [`geometry`]: boundaries and the characteristic functionals ℓ±;
//! - [`billiard`]: the chess billiard map b = γ⁺∘γ⁻ on the boundary;
//! - [`rotation`]: rotation numbers with rigorous enclosures, scans,
//!   plateau detection;
//! - [`arithmetic`]: continued fractions and Diophantine profiles;
//! - [`conjugacy`]: cohomological equations and numerical conjugacy of the
//!   billiard to a rigid rotation;
//! - [`square`]: the exactly solvable unit-square model in the Dirichlet
//!   sine basis;
//! - [`evolution`]: the Duhamel multiplier and dyadic spectral splitting;
//! - [`layerpot`]: fundamental solutions, single-layer boundary systems at
//!   complex ω, and limiting-absorption sweeps.

pub mod arithmetic;
pub mod billiard;
pub mod evolution;
pub mod geometry;
pub mod layerpot;
pub mod quad;
pub mod conjugacy;
pub mod rotation;
pub mod square;
