//! Exact spectral analysis of Z^d constant-shape (q-) substitutions.
//!
//! The crate computes, entirely in rational arithmetic where possible:
//!
//! * base-q arithmetic on Z^d ([`zd`]): division with remainder, digit
//!   expansions, carry sets;
//! * substitutions as configurations of instructions ([`substitution`]),
//!   their matrices, products and bisubstitutions;
//! * ergodic decompositions, invariant weights, spectral projections and
//!   aperiodicity checks ([`structure`]);
//! * the spectral hull of a substitution and its extreme points ([`hull`]);
//! * exact Fourier coefficients of the correlation measures via the
//!   coefficient recursion ([`fourier`]);
//! * a pure-type classification of each extremal spectral component and the
//!   assembled decomposition report ([`classify`]);
//! * a brute-force pattern-frequency oracle for cross-checking ([`oracle`]).
//!
//! [`specfile`] defines the on-disk substitution format shared with the CLI.

pub mod classify;
pub mod cmat;
pub mod error;
pub mod fourier;
pub mod hull;
pub mod matrix;
pub mod oracle;
pub mod pipeline;
pub mod poly;
pub mod specfile;
pub mod structure;
pub mod substitution;
pub mod zd;

pub use error::{Error, Result};

/// All complex roots of a rational polynomial (low degree first), by
/// Durand-Kerner iteration.  Float-grade; used for eigenvalue cross-checks.
pub fn poly_roots_f64(coeffs: &[matrix::Rat]) -> Vec<num_complex::Complex64> {
    use num_complex::Complex64;
    let c: Vec<f64> = coeffs.iter().map(matrix::rat_to_f64).collect();
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::ZERO;
        for k in (0..=n).rev() {
            acc = acc * z + Complex64::from(monic[k]);
        }
        acc
    };
    let radius = 1.0 + monic[..n].iter().map(|x| x.abs()).fold(0.0f64, f64::max);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * (k as f64 + 0.25) / n as f64;
            Complex64::from_polar(radius.max(1.0) * 0.7, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut shift = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-13 {
            break;
        }
    }
    roots
}
