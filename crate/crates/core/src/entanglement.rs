//! Entanglement of formation for pure and decohered entangled coherent
//! states, and Wootters concurrence for arbitrary two-qubit states.

use crate::channels::{evolve_ecs, two_qubit_density, DecayParams};
use crate::error::{Error, Result};
use crate::linalg::{clamp_psd_spectrum, hermitian_eig, psd_sqrt, Matrix};
use crate::scalar::Real;
use crate::states::{ecs_normalization, one_minus_exp_neg, EcsParams};

/// Spectrum of the reduced state of a pure ECS and its entropy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EofResult<T> {
    pub lambda_plus: T,
    pub lambda_minus: T,
    pub eof_bits: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceResult<T> {
    pub concurrence: T,
    /// Square roots of the eigenvalues of `rho rho~`, descending.
    pub roots: [T; 4],
}

/// `-p log2 p - q log2 q` for a two-outcome distribution whose parts are
/// both known accurately.
fn entropy_pair<T: Real>(p: T, q: T) -> T {
    let term = |x: T| if x > T::zero() && x < T::one() { -x * x.log2() } else { T::zero() };
    term(p) + term(q)
}

/// Binary entropy `h(x)` in bits.
pub fn binary_entropy<T: Real>(x: T) -> Result<T> {
    let slack = T::tol(1e-12);
    if !(x >= -slack && x <= T::one() + slack) {
        return Err(Error::OutOfRange { what: "binary entropy argument", value: x.to_f64_lossy() });
    }
    let x = x.max(T::zero()).min(T::one());
    Ok(entropy_pair(x, T::one() - x))
}

/// Closed-form spectrum of `Tr_1 |C><C|` and the pure-state EoF.
///
/// The discriminant `1/4 - N^4 (1 - q1^2)(1 - q2^2)` with `q_i = e^{-2|a_i|^2}`
/// is evaluated in the rearranged form
/// `N^4 [(q1 - q2)^2 + 4 cos^2(phi/2) q1 q2 - sin^2(phi) q1^2 q2^2]`, which
/// vanishes exactly for `a1 = a2`, `phi = pi`.
pub fn pure_ecs_eigenvalues<T: Real>(p: &EcsParams<T>) -> EofResult<T> {
    let two = T::lit(2.0);
    let (x1, x2) = (two * p.alpha1().norm_sqr(), two * p.alpha2().norm_sqr());
    let (q1, q2) = ((-x1).exp(), (-x2).exp());
    let n2 = {
        let n = ecs_normalization(p);
        n * n
    };
    let n4 = n2 * n2;
    let ch = (p.phi() / two).cos();
    let s = p.phi().sin();
    let disc = n4 * ((q1 - q2).powi(2) + T::lit(4.0) * ch * ch * q1 * q2 - s * s * q1 * q1 * q2 * q2);
    let det = n4 * one_minus_exp_neg(x1 + x1) * one_minus_exp_neg(x2 + x2);
    let lambda_plus = T::lit(0.5) + disc.max(T::zero()).sqrt();
    let lambda_minus = det / lambda_plus;
    EofResult { lambda_plus, lambda_minus, eof_bits: entropy_pair(lambda_plus, lambda_minus) }
}

/// `(sigma_y ⊗ sigma_y) rho* (sigma_y ⊗ sigma_y)`.
pub fn spin_flip<T: Real>(rho: &Matrix<T>) -> Matrix<T> {
    let yy = Matrix::sigma_y().kron(&Matrix::sigma_y());
    &(&yy * &rho.conj()) * &yy
}

fn check_two_qubit_density<T: Real>(rho: &Matrix<T>) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit state must be 4x4, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let tr = rho.trace();
    if (tr.re - T::one()).abs() > T::tol(1e-8) || tr.im.abs() > T::tol(1e-8) {
        return Err(Error::NotDensityMatrix(format!("trace {} + {}i", tr.re, tr.im)));
    }
    Ok(())
}

/// Wootters concurrence.
///
/// The roots are taken from the Hermitian matrix `sqrt(rho) rho~ sqrt(rho)`,
/// which is similar to `rho rho~`; its eigenvalues are the squared roots.
pub fn concurrence<T: Real>(rho: &Matrix<T>) -> Result<ConcurrenceResult<T>> {
    check_two_qubit_density(rho)?;
    let as_density = |e: Error| match e {
        Error::NotPsd { min_eigenvalue } => Error::NotDensityMatrix(format!("eigenvalue {min_eigenvalue:e}")),
        other => other,
    };
    let sqrt_rho = psd_sqrt(rho).map_err(as_density)?;
    let m = &(&sqrt_rho * &spin_flip(rho)) * &sqrt_rho;
    let spec = hermitian_eig(&m)?;
    let squared = clamp_psd_spectrum(&spec.eigenvalues).map_err(as_density)?;
    let mut roots = [T::zero(); 4];
    for (r, l) in roots.iter_mut().zip(&squared) {
        *r = l.sqrt();
    }
    let c = roots[0] - roots[1] - roots[2] - roots[3];
    Ok(ConcurrenceResult { concurrence: c.max(T::zero()), roots })
}

/// `E = h(1/2 + sqrt(1 - C^2)/2)`.
pub fn eof_from_concurrence<T: Real>(c: T) -> Result<T> {
    let slack = T::tol(1e-12);
    if !(c >= -slack && c <= T::one() + slack) {
        return Err(Error::OutOfRange { what: "concurrence", value: c.to_f64_lossy() });
    }
    let c = c.max(T::zero()).min(T::one());
    let root = ((T::one() - c) * (T::one() + c)).max(T::zero()).min(T::one()).sqrt();
    let half = T::lit(0.5);
    let p = half + half * root;
    // (1 - root) / 2 without cancellation
    let q = c * c / (T::lit(2.0) * (T::one() + root));
    Ok(entropy_pair(p, q))
}

/// Mixed-state EoF of a decayed ECS with the status of the qubit encoding.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixedEof<T> {
    pub eof_bits: T,
    pub concurrence: T,
    /// A mode decayed to (numerically) the vacuum, so the state is a product.
    pub singular_encoding: bool,
}

pub fn mixed_ecs_eof_detailed<T: Real>(p: &EcsParams<T>, dp: &DecayParams<T>) -> Result<MixedEof<T>> {
    let e = evolve_ecs(p, dp);
    let rho = match two_qubit_density(&e) {
        Ok(rho) => rho,
        Err(Error::SingularEncoding { .. }) => {
            return Ok(MixedEof { eof_bits: T::zero(), concurrence: T::zero(), singular_encoding: true })
        }
        Err(other) => return Err(other),
    };
    let c = concurrence(&rho)?.concurrence;
    Ok(MixedEof { eof_bits: eof_from_concurrence(c)?, concurrence: c, singular_encoding: false })
}

/// Entanglement of formation of a decohered ECS, in bits.
pub fn mixed_ecs_eof<T: Real>(p: &EcsParams<T>, dp: &DecayParams<T>) -> Result<T> {
    Ok(mixed_ecs_eof_detailed(p, dp)?.eof_bits)
}

/// How strongly the EoF depends on the relative phase at fixed amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSensitivity<T> {
    pub max_eof: T,
    pub min_eof: T,
    /// `(max - min) / max`.
    pub relative_range: T,
}

/// Scans `phi = k pi / steps_per_pi` over `[0, 2 pi]` at
/// `|a1| = |a2| = alpha` and decay `dp`.
pub fn phase_sensitivity<T: Real>(alpha: T, dp: &DecayParams<T>, steps_per_pi: usize) -> Result<PhaseSensitivity<T>> {
    if steps_per_pi == 0 {
        return Err(Error::OutOfRange { what: "phase steps", value: 0.0 });
    }
    let step = T::PI() / T::lit(steps_per_pi as f64);
    let mut max_eof = T::neg_infinity();
    let mut min_eof = T::infinity();
    for k in 0..=2 * steps_per_pi {
        let p = EcsParams::real(alpha, alpha, step * T::lit(k as f64))?;
        let e = mixed_ecs_eof(&p, dp)?;
        max_eof = max_eof.max(e);
        min_eof = min_eof.min(e);
    }
    let relative_range = if max_eof > T::zero() { (max_eof - min_eof) / max_eof } else { T::zero() };
    Ok(PhaseSensitivity { max_eof, min_eof, relative_range })
}
