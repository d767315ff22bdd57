//! Coherent-state algebra: overlaps, entangled coherent state normalization,
//! even/odd cat states and the two-dimensional qubit encoding of a pair
//! `{|a>, |-a>}` of coherent states.

use crate::error::{Error, Result};
use crate::scalar::{is_finite_cx, Cx, Real};

/// Smallest admissible `1 - eta^2` for the orthonormal encoding.
pub const ENCODING_THRESHOLD: f64 = 1e-12;

/// Smallest admissible cat-state amplitude.
pub const DEGENERATE_AMPLITUDE: f64 = 1e-6;

const NULL_STATE_THRESHOLD: f64 = 1e-12;

/// `<a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)`.
pub fn coherent_overlap<T: Real>(a: Cx<T>, b: Cx<T>) -> Result<Cx<T>> {
    if !is_finite_cx(a) || !is_finite_cx(b) {
        return Err(Error::NotFinite("coherent amplitude"));
    }
    let half = T::lit(0.5);
    Ok((a.conj() * b - Cx::from(half * (a.norm_sqr() + b.norm_sqr()))).exp())
}

/// `1 - exp(-x)` without cancellation for small `x`.
#[inline]
pub(crate) fn one_minus_exp_neg<T: Real>(x: T) -> T {
    -(-x).exp_m1()
}

/// Two-mode entangled coherent state `N (|a1>|a2> + e^{i phi} |-a1>|-a2>)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EcsParams<T> {
    alpha1: Cx<T>,
    alpha2: Cx<T>,
    phi: T,
}

impl<T: Real> EcsParams<T> {
    /// Validates the amplitudes and reduces `phi` to `[0, 2 pi)`.
    pub fn new(alpha1: Cx<T>, alpha2: Cx<T>, phi: T) -> Result<Self> {
        if !is_finite_cx(alpha1) || !is_finite_cx(alpha2) || !phi.is_finite() {
            return Err(Error::NotFinite("ECS parameters"));
        }
        let tau = T::TAU();
        let mut phi = phi % tau;
        if phi < T::zero() {
            phi = phi + tau;
        }
        if phi >= tau {
            phi = T::zero();
        }
        let p = Self { alpha1, alpha2, phi };
        let norm_sq = p.inverse_norm_sq();
        if !(norm_sq > T::tol(NULL_STATE_THRESHOLD)) {
            return Err(Error::NullState { norm_sq: norm_sq.to_f64_lossy() });
        }
        Ok(p)
    }

    /// Real, non-negative amplitudes.
    pub fn real(alpha1: T, alpha2: T, phi: T) -> Result<Self> {
        Self::new(Cx::from(alpha1), Cx::from(alpha2), phi)
    }

    pub fn alpha1(&self) -> Cx<T> {
        self.alpha1
    }

    pub fn alpha2(&self) -> Cx<T> {
        self.alpha2
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// `N^-2 = 2 + 2 cos(phi) exp(-2|a1|^2 - 2|a2|^2)`.
    ///
    /// Written as `2(1 - q) + 2(1 + cos phi) q` so that the `phi = pi`
    /// branch loses no digits when both amplitudes are small.
    fn inverse_norm_sq(&self) -> T {
        let two = T::lit(2.0);
        let x = two * (self.alpha1.norm_sqr() + self.alpha2.norm_sqr());
        let q = (-x).exp();
        let half_phi_cos = (self.phi / two).cos();
        two * one_minus_exp_neg(x) + two * two * half_phi_cos * half_phi_cos * q
    }
}

/// Normalization constant `N_phi` of the ECS.
pub fn ecs_normalization<T: Real>(p: &EcsParams<T>) -> T {
    p.inverse_norm_sq().sqrt().recip()
}

/// Normalizations of the even and odd cat states `N_pm (|a'> ± |-a'>)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatNormalization<T> {
    pub n_plus: T,
    pub n_minus: T,
}

impl<T: Real> CatNormalization<T> {
    pub fn n_plus_sq(&self) -> T {
        self.n_plus * self.n_plus
    }

    pub fn n_minus_sq(&self) -> T {
        self.n_minus * self.n_minus
    }
}

pub fn cat_normalization<T: Real>(alpha_prime: Cx<T>) -> Result<CatNormalization<T>> {
    if !is_finite_cx(alpha_prime) {
        return Err(Error::NotFinite("cat amplitude"));
    }
    let r = alpha_prime.norm();
    if r < T::lit(DEGENERATE_AMPLITUDE) {
        return Err(Error::DegenerateInput(format!("cat amplitude {r} below {DEGENERATE_AMPLITUDE}")));
    }
    let two = T::lit(2.0);
    let x = two * r * r;
    let q = (-x).exp();
    Ok(CatNormalization {
        n_plus: (two + two * q).sqrt().recip(),
        n_minus: (two * one_minus_exp_neg(x)).sqrt().recip(),
    })
}

/// Orthonormal basis `{|1>, |0>}` of `span{|a>, |-a>}` with `|1> = |a>`
/// and `|-a> = eta |1> + sqrt(1 - eta^2) |0>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitEncoding<T> {
    pub alpha: Cx<T>,
    /// `eta = <a|-a> = exp(-2|a|^2)`.
    pub eta: T,
    /// `sqrt(1 - eta^2)`.
    pub gap: T,
}

impl<T: Real> QubitEncoding<T> {
    /// Components of `|a>` in the `(|1>, |0>)` basis.
    pub fn plus_components(&self) -> [T; 2] {
        [T::one(), T::zero()]
    }

    /// Components of `|-a>` in the `(|1>, |0>)` basis.
    pub fn minus_components(&self) -> [T; 2] {
        [self.eta, self.gap]
    }

    /// Components of `|s a>` for `s = ±1`.
    pub fn components(&self, sign: Sign) -> [T; 2] {
        match sign {
            Sign::Plus => self.plus_components(),
            Sign::Minus => self.minus_components(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn apply<T: Real>(self, z: Cx<T>) -> Cx<T> {
        match self {
            Sign::Plus => z,
            Sign::Minus => -z,
        }
    }

    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

pub fn qubit_encoding<T: Real>(alpha_t: Cx<T>) -> Result<QubitEncoding<T>> {
    if !is_finite_cx(alpha_t) {
        return Err(Error::NotFinite("encoded amplitude"));
    }
    let x = T::lit(2.0) * alpha_t.norm_sqr();
    let eta = (-x).exp();
    // 1 - eta^2 = 1 - exp(-2x)
    let gap_sq = one_minus_exp_neg(x + x);
    if gap_sq < T::tol(ENCODING_THRESHOLD) {
        return Err(Error::SingularEncoding { gap: gap_sq.to_f64_lossy() });
    }
    Ok(QubitEncoding { alpha: alpha_t, eta, gap: gap_sq.sqrt() })
}
