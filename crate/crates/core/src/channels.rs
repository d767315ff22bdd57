//! Vacuum (zero-temperature amplitude damping) decoherence of entangled
//! coherent states.
//!
//! Under photon loss each coherent amplitude shrinks as `a e^{-gamma t / 2}`
//! and the coherence between the two branches of the ECS picks up the
//! factor `exp(-2 d^2 (|a1|^2 + |a2|^2))` with `d = sqrt(1 - e^{-gamma t})`.
//! The decayed state stays inside `span{|a1(t)>, |-a1(t)>} ⊗ span{|a2(t)>, |-a2(t)>}`
//! and is written here as a 4x4 two-qubit density matrix.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{re, Cx, Real};
use crate::states::{
    coherent_overlap, ecs_normalization, one_minus_exp_neg, qubit_encoding, EcsParams, QubitEncoding,
    DEGENERATE_AMPLITUDE,
};

/// Decoherence strength, parameterized by the dimensionless time `gamma t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayParams<T> {
    gamma_t: T,
    survival: T,
    degree: T,
}

impl<T: Real> DecayParams<T> {
    pub fn none() -> Self {
        Self { gamma_t: T::zero(), survival: T::one(), degree: T::zero() }
    }

    /// From the degree of decay `d = sqrt(1 - e^{-gamma t})`, `d ∈ [0, 1]`.
    /// `d = 1` is the fully decayed limit (`gamma t = inf`).
    pub fn from_degree(d: T) -> Result<Self> {
        if !d.is_finite() {
            return Err(Error::NotFinite("degree of decay"));
        }
        if d < T::zero() || d > T::one() {
            return Err(Error::OutOfRange { what: "degree of decay", value: d.to_f64_lossy() });
        }
        let d2 = d * d;
        Ok(Self { gamma_t: -(-d2).ln_1p(), survival: T::one() - d2, degree: d })
    }

    pub fn gamma_t(&self) -> T {
        self.gamma_t
    }

    /// Degree of decay `d`.
    pub fn degree(&self) -> T {
        self.degree
    }

    /// `e^{-gamma t}`.
    pub fn survival(&self) -> T {
        self.survival
    }

    /// `e^{-gamma t / 2}`, the amplitude damping factor.
    pub fn amplitude_factor(&self) -> T {
        self.survival.sqrt()
    }

    /// Decay by `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        let survival = self.survival * other.survival;
        // d^2 = d1^2 + e^{-gt1} d2^2 avoids forming 1 - survival.
        let d2 = self.degree * self.degree + self.survival * other.degree * other.degree;
        Self { gamma_t: self.gamma_t + other.gamma_t, survival, degree: d2.min(T::one()).sqrt() }
    }
}

pub fn decay_params<T: Real>(gamma_t: T) -> Result<DecayParams<T>> {
    if !gamma_t.is_finite() {
        return Err(Error::NotFinite("gamma t"));
    }
    if gamma_t < T::zero() {
        return Err(Error::NegativeTime(gamma_t.to_f64_lossy()));
    }
    Ok(DecayParams { gamma_t, survival: (-gamma_t).exp(), degree: one_minus_exp_neg(gamma_t).sqrt() })
}

/// Closed form of a decohered ECS.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayedEcs<T> {
    pub params: EcsParams<T>,
    pub decay: DecayParams<T>,
    pub alpha1_t: Cx<T>,
    pub alpha2_t: Cx<T>,
    /// `exp(-2 e^{-gamma t} |a1|^2)`.
    pub eta1: T,
    pub eta2: T,
    /// Coefficient of `|a1(t) a2(t)><-a1(t) -a2(t)|` (divided by `N^2`).
    pub beta12: Cx<T>,
    /// `N_phi` of the initial pure state.
    pub norm: T,
}

pub fn evolve_ecs<T: Real>(p: &EcsParams<T>, dp: &DecayParams<T>) -> DecayedEcs<T> {
    let two = T::lit(2.0);
    let f = dp.amplitude_factor();
    let (a1, a2) = (p.alpha1(), p.alpha2());
    let d2 = dp.degree() * dp.degree();
    let damping = (-two * d2 * (a1.norm_sqr() + a2.norm_sqr())).exp();
    let alpha1_t = a1.scale(f);
    let alpha2_t = a2.scale(f);
    DecayedEcs {
        params: *p,
        decay: *dp,
        alpha1_t,
        alpha2_t,
        eta1: (-two * alpha1_t.norm_sqr()).exp(),
        eta2: (-two * alpha2_t.norm_sqr()).exp(),
        beta12: Cx::from_polar(damping, -p.phi()),
        norm: ecs_normalization(p),
    }
}

impl<T: Real> DecayedEcs<T> {
    /// Continue the decay of this state by `more`.
    pub fn then(&self, more: &DecayParams<T>) -> Self {
        let two = T::lit(2.0);
        let f = more.amplitude_factor();
        let d2 = more.degree() * more.degree();
        let extra = (-two * d2 * (self.alpha1_t.norm_sqr() + self.alpha2_t.norm_sqr())).exp();
        let alpha1_t = self.alpha1_t.scale(f);
        let alpha2_t = self.alpha2_t.scale(f);
        Self {
            params: self.params,
            decay: self.decay.then(more),
            alpha1_t,
            alpha2_t,
            eta1: (-two * alpha1_t.norm_sqr()).exp(),
            eta2: (-two * alpha2_t.norm_sqr()).exp(),
            beta12: self.beta12.scale(extra),
            norm: self.norm,
        }
    }

    /// `<l1 l2| rho(t) |r1 r2>` for coherent-state kets, from the closed form.
    pub fn sandwich(&self, left: [Cx<T>; 2], right: [Cx<T>; 2]) -> Result<Cx<T>> {
        let plus = [self.alpha1_t, self.alpha2_t];
        let minus = [-self.alpha1_t, -self.alpha2_t];
        let ov = |bra: [Cx<T>; 2], ket: [Cx<T>; 2]| -> Result<Cx<T>> {
            Ok(coherent_overlap(bra[0], ket[0])? * coherent_overlap(bra[1], ket[1])?)
        };
        let (l_p, l_m) = (ov(left, plus)?, ov(left, minus)?);
        let (p_r, m_r) = (ov(plus, right)?, ov(minus, right)?);
        let body = l_p * p_r + l_m * m_r + self.beta12 * l_p * m_r + self.beta12.conj() * l_m * p_r;
        Ok(body.scale(self.norm * self.norm))
    }

    pub fn encodings(&self) -> Result<(QubitEncoding<T>, QubitEncoding<T>)> {
        Ok((qubit_encoding(self.alpha1_t)?, qubit_encoding(self.alpha2_t)?))
    }
}

/// Two-qubit density matrix of a decayed ECS in the basis
/// `|11>, |10>, |01>, |00>` (qubit `|1>` is the `+a(t)` state).
///
/// Built as the Gram mixture `N^2 (|u><u| + |v><v| + b |u><v| + b* |v><u|)`
/// with `|u> = |a1(t) a2(t)>` and `|v> = |-a1(t) -a2(t)>` expressed in the
/// encoding.
pub fn two_qubit_density<T: Real>(e: &DecayedEcs<T>) -> Result<Matrix<T>> {
    let (enc1, enc2) = e.encodings()?;
    let m1 = enc1.minus_components();
    let m2 = enc2.minus_components();
    let u = [Cx::from(T::one()), Cx::zero(), Cx::zero(), Cx::zero()];
    let v = [re(m1[0] * m2[0]), re(m1[0] * m2[1]), re(m1[1] * m2[0]), re(m1[1] * m2[1])];
    let n2 = e.norm * e.norm;
    let b = e.beta12;
    Ok(Matrix::from_fn(4, 4, |i, j| (u[i] * u[j] + v[i] * v[j] + b * u[i] * v[j] + b.conj() * v[i] * u[j]).scale(n2)))
}

/// The pure channel `|C(a, a, pi)>` after vacuum decay.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisyChannel<T> {
    pub alpha: Cx<T>,
    pub alpha_t: Cx<T>,
    /// `-exp(-4 d^2 |a|^2)`.
    pub beta: T,
    /// `(2 - 2 e^{-4|a|^2})^{-1/2}`.
    pub n_alpha: T,
    pub decay: DecayParams<T>,
}

impl<T: Real> NoisyChannel<T> {
    pub fn ecs(&self) -> Result<EcsParams<T>> {
        EcsParams::new(self.alpha, self.alpha, T::PI())
    }
}

pub fn noisy_channel<T: Real>(alpha: Cx<T>, dp: &DecayParams<T>) -> Result<NoisyChannel<T>> {
    let r = alpha.norm();
    if !r.is_finite() {
        return Err(Error::NotFinite("channel amplitude"));
    }
    if r < T::lit(DEGENERATE_AMPLITUDE) {
        return Err(Error::DegenerateInput(format!("channel amplitude {r} below {DEGENERATE_AMPLITUDE}")));
    }
    let four = T::lit(4.0);
    let r2 = r * r;
    let d2 = dp.degree() * dp.degree();
    Ok(NoisyChannel {
        alpha,
        alpha_t: alpha.scale(dp.amplitude_factor()),
        beta: -(-four * d2 * r2).exp(),
        n_alpha: (T::lit(2.0) * one_minus_exp_neg(four * r2)).sqrt().recip(),
        decay: *dp,
    })
}
