//! Probabilistic teleportation of a cat-state qubit through a decohered
//! entangled coherent state, with a single classical bit (success/failure).
//!
//! Alice holds `|psi>_a = A+ |a'> + A- |-a'>` and mode 1 of the channel
//! `|C(a, a, pi)>`; she projects `(a, 1)` onto `|Phi+>` built from cats of
//! amplitude `a'`. On success Bob keeps mode 2, otherwise he discards it.
//! Mean quantities average over inputs drawn uniformly from the Bloch sphere
//! of `span{|psi+>, |psi->}`, and the fidelity is conditioned on success.

use num_traits::Zero;
use rayon::prelude::*;

use crate::channels::{noisy_channel, DecayParams, NoisyChannel};
use crate::error::{Error, Result};
use crate::scalar::{Cx, Real};
use crate::states::{cat_normalization, coherent_overlap, one_minus_exp_neg, CatNormalization, DEGENERATE_AMPLITUDE};

/// Fidelity achievable without entanglement.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;

/// Relative distance `|A - B| / B` below which the log-ratio kernels switch
/// to their Taylor series.
pub const SERIES_WINDOW: f64 = 5e-2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TeleportParams<T> {
    alpha_prime: T,
    alpha: T,
    decay: DecayParams<T>,
}

fn check_amplitude<T: Real>(what: &'static str, x: T) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NotFinite(what));
    }
    if x < T::lit(DEGENERATE_AMPLITUDE) {
        return Err(Error::DegenerateInput(format!("{what} {x} below {DEGENERATE_AMPLITUDE}")));
    }
    Ok(())
}

impl<T: Real> TeleportParams<T> {
    pub fn new(alpha_prime: T, alpha: T, decay: DecayParams<T>) -> Result<Self> {
        check_amplitude("input amplitude", alpha_prime)?;
        check_amplitude("channel amplitude", alpha)?;
        Ok(Self { alpha_prime, alpha, decay })
    }

    /// Complex amplitudes sharing one global phase; the phase is discarded.
    pub fn from_complex(alpha_prime: Cx<T>, alpha: Cx<T>, decay: DecayParams<T>) -> Result<Self> {
        let cross = alpha_prime.conj() * alpha;
        if cross.im.abs() > T::tol(1e-12) * cross.norm().max(T::one()) || cross.re < T::zero() {
            return Err(Error::OutOfRange { what: "relative phase of amplitudes", value: cross.arg().to_f64_lossy() });
        }
        Self::new(alpha_prime.norm(), alpha.norm(), decay)
    }

    pub fn alpha_prime(&self) -> T {
        self.alpha_prime
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn decay(&self) -> &DecayParams<T> {
        &self.decay
    }

    pub fn channel(&self) -> Result<NoisyChannel<T>> {
        noisy_channel(Cx::from(self.alpha), &self.decay)
    }

    pub fn input_cats(&self) -> Result<CatNormalization<T>> {
        cat_normalization(Cx::from(self.alpha_prime))
    }
}

/// Shorthands shared by the success probability and mean fidelity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityIntermediates<T> {
    /// `exp(-2 e^{-gamma t} |a|^2)`.
    pub eta: T,
    /// `-exp(-4 d^2 |a|^2)`.
    pub beta: T,
    /// `N+^2 cosh^2(e^{-gamma t/2} |a' a|)`.
    pub mu: T,
    /// `N-^2 sinh^2(e^{-gamma t/2} |a' a|)`.
    pub nu: T,
    /// `exp(-|a'|^2 - e^{-gamma t} |a|^2)`.
    pub envelope: T,
    /// `1 - beta eta`, formed without cancellation.
    pub one_minus_beta_eta: T,
    /// `1 + beta eta`, formed without cancellation.
    pub one_plus_beta_eta: T,
    pub n_alpha_sq: T,
}

impl<T: Real> FidelityIntermediates<T> {
    /// `nu (1 - beta eta)`, the numerator of the log ratio.
    pub fn a(&self) -> T {
        self.nu * self.one_minus_beta_eta
    }

    /// `mu (1 + beta eta)`.
    pub fn b(&self) -> T {
        self.mu * self.one_plus_beta_eta
    }
}

pub fn intermediates<T: Real>(p: &TeleportParams<T>) -> Result<FidelityIntermediates<T>> {
    let cats = p.input_cats()?;
    let ch = p.channel()?;
    let s = p.decay.survival();
    let d2 = p.decay.degree() * p.decay.degree();
    let a2 = p.alpha * p.alpha;
    let z = p.decay.amplitude_factor() * p.alpha_prime * p.alpha;
    // beta eta = -exp(-(4 d^2 + 2 s) |a|^2)
    let x = (T::lit(4.0) * d2 + T::lit(2.0) * s) * a2;
    Ok(FidelityIntermediates {
        eta: (-T::lit(2.0) * s * a2).exp(),
        beta: ch.beta,
        mu: cats.n_plus_sq() * z.cosh().powi(2),
        nu: cats.n_minus_sq() * z.sinh().powi(2),
        envelope: (-p.alpha_prime * p.alpha_prime - s * a2).exp(),
        one_minus_beta_eta: T::one() + (-x).exp(),
        one_plus_beta_eta: one_minus_exp_neg(x),
        n_alpha_sq: ch.n_alpha * ch.n_alpha,
    })
}

/// Mean probability that Alice's Bell measurement returns `|Phi+>`.
pub fn success_probability<T: Real>(p: &TeleportParams<T>) -> Result<T> {
    let k = intermediates(p)?;
    let cats = p.input_cats()?;
    let z2 = T::lit(2.0) * p.decay.amplitude_factor() * p.alpha_prime * p.alpha;
    let half_z = z2 / T::lit(2.0);
    // cosh(2z) - 1 = 2 sinh^2 z, cosh(2z) + 1 = 2 cosh^2 z
    let cosh_minus = T::lit(2.0) * half_z.sinh().powi(2);
    let cosh_plus = T::lit(2.0) * half_z.cosh().powi(2);
    Ok(cats.n_minus_sq() * k.n_alpha_sq * k.one_minus_beta_eta * k.envelope * cosh_minus
        + cats.n_plus_sq() * k.n_alpha_sq * k.one_plus_beta_eta * k.envelope * cosh_plus)
}

/// Returns `(ln(A/B) / (A - B), (A^2 - B^2 - 2AB ln(A/B)) / (A - B)^3)`.
///
/// Both are analytic at `A = B` (limits `1/B` and `1/(3B)`); near it the
/// Taylor series in `e = (A - B)/B` is summed instead of the direct form.
pub fn stable_log_ratio_kernel<T: Real>(a: T, b: T) -> Result<(T, T)> {
    for x in [a, b] {
        if !(x > T::zero()) || !x.is_finite() {
            return Err(Error::NonPositive(x.to_f64_lossy()));
        }
    }
    let e = (a - b) / b;
    if e.abs() <= T::lit(SERIES_WINDOW) {
        // ln(1+e)/e = sum (-e)^k / (k+1)
        // [(2e + e^2) - 2(1+e) ln(1+e)] / e^3 = sum 2 (-e)^j / ((j+2)(j+3))
        let mut first = T::zero();
        let mut second = T::zero();
        let mut power = T::one();
        for k in 0..64 {
            let kk = T::lit(k as f64);
            let t1 = power / (kk + T::one());
            let t2 = T::lit(2.0) * power / ((kk + T::lit(2.0)) * (kk + T::lit(3.0)));
            first = first + t1;
            second = second + t2;
            if t1.abs() <= T::epsilon() * first.abs() && t2.abs() <= T::epsilon() * second.abs() {
                break;
            }
            power = power * -e;
        }
        return Ok((first / b, second / b));
    }
    let log = e.ln_1p();
    let diff = a - b;
    let first = log / diff;
    let second = ((T::lit(2.0) * e + e * e) - T::lit(2.0) * (T::one() + e) * log) / (b * e * e * e);
    Ok((first, second))
}

/// Mean fidelity of Bob's state, conditioned on success.
pub fn mean_fidelity<T: Real>(p: &TeleportParams<T>) -> Result<T> {
    let k = intermediates(p)?;
    let (k1, k2) = stable_log_ratio_kernel(k.a(), k.b())?;
    let two = T::lit(2.0);
    let (b, mu, nu) = (k.beta, k.mu, k.nu);
    let log_term = two * (T::one() - b) * mu * nu * k1;
    let cubic_term = (T::one() + b) * (mu * mu + nu * nu) * k2;
    Ok(two * k.envelope * (log_term + cubic_term))
}

/// Which of the four cat-basis Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// A Bell state written over coherent-state products:
/// `sum_{s,t} coeffs[s][t] |s a_a> |t a_b>` with index 0 for `+`, 1 for `-`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellState<T> {
    pub kind: BellKind,
    pub coeffs: [[T; 2]; 2],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellBasis<T> {
    pub alpha_a: T,
    pub alpha_b: T,
    pub states: [BellState<T>; 4],
}

/// `|Phi±> = (|psi+>|psi-> ± |psi->|psi+>)/sqrt 2`,
/// `|Psi±> = (|psi+>|psi+> ± |psi->|psi->)/sqrt 2`, with the first factor's
/// cats at amplitude `alpha_a` and the second's at `alpha_b`.
pub fn bell_states<T: Real>(alpha_a: T, alpha_b: T) -> Result<BellBasis<T>> {
    check_amplitude("Bell amplitude", alpha_a)?;
    check_amplitude("Bell amplitude", alpha_b)?;
    let ca = cat_normalization(Cx::from(alpha_a))?;
    let cb = cat_normalization(Cx::from(alpha_b))?;
    let even = |c: &CatNormalization<T>| [c.n_plus, c.n_plus];
    let odd = |c: &CatNormalization<T>| [c.n_minus, -c.n_minus];
    let (ea, oa, eb, ob) = (even(&ca), odd(&ca), even(&cb), odd(&cb));
    let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let build = |kind, f: &dyn Fn(usize, usize) -> T| {
        let mut coeffs = [[T::zero(); 2]; 2];
        for (s, row) in coeffs.iter_mut().enumerate() {
            for (t, c) in row.iter_mut().enumerate() {
                *c = h * f(s, t);
            }
        }
        BellState { kind, coeffs }
    };
    Ok(BellBasis {
        alpha_a,
        alpha_b,
        states: [
            build(BellKind::PhiPlus, &|s, t| ea[s] * ob[t] + oa[s] * eb[t]),
            build(BellKind::PhiMinus, &|s, t| ea[s] * ob[t] - oa[s] * eb[t]),
            build(BellKind::PsiPlus, &|s, t| ea[s] * eb[t] + oa[s] * ob[t]),
            build(BellKind::PsiMinus, &|s, t| ea[s] * eb[t] - oa[s] * ob[t]),
        ],
    })
}

impl<T: Real> BellBasis<T> {
    pub fn get(&self, kind: BellKind) -> &BellState<T> {
        self.states.iter().find(|s| s.kind == kind).expect("all four kinds present")
    }

    /// Gram matrix of the four states, from closed-form coherent overlaps.
    pub fn gram(&self) -> Result<[[Cx<T>; 4]; 4]> {
        let amp = |x: T, s: usize| if s == 0 { Cx::from(x) } else { Cx::from(-x) };
        let mut g = [[Cx::zero(); 4]; 4];
        for (i, bi) in self.states.iter().enumerate() {
            for (j, bj) in self.states.iter().enumerate() {
                let mut acc = Cx::zero();
                for s in 0..2 {
                    for t in 0..2 {
                        for u in 0..2 {
                            for v in 0..2 {
                                let ov = coherent_overlap(amp(self.alpha_a, s), amp(self.alpha_a, u))?
                                    * coherent_overlap(amp(self.alpha_b, t), amp(self.alpha_b, v))?;
                                acc = acc + ov.scale(bi.coeffs[s][t] * bj.coeffs[u][v]);
                            }
                        }
                    }
                }
                g[i][j] = acc;
            }
        }
        Ok(g)
    }
}

/// One revival: at channel amplitude `alpha`, more decay (`d_after > d_before`)
/// gives a higher mean fidelity that also beats the classical limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Revival<T> {
    pub alpha: T,
    pub d_before: T,
    pub d_after: T,
    pub fidelity_before: T,
    pub fidelity_after: T,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RevivalReport<T> {
    pub revivals: Vec<Revival<T>>,
}

impl<T: Real> RevivalReport<T> {
    pub fn is_empty(&self) -> bool {
        self.revivals.is_empty()
    }

    pub fn best(&self) -> Option<&Revival<T>> {
        self.revivals
            .iter()
            .max_by(|a, b| a.fidelity_after.partial_cmp(&b.fidelity_after).unwrap_or(std::cmp::Ordering::Equal))
    }
}

/// Scans every `(alpha, d1 < d2)` pair of the grid for fidelity revivals
/// above the classical limit. Rows are evaluated in parallel and reported in
/// grid order.
pub fn revival_search<T: Real>(alpha_prime: T, alpha_grid: &[T], d_grid: &[T]) -> Result<RevivalReport<T>> {
    if alpha_grid.is_empty() || d_grid.is_empty() {
        return Err(Error::OutOfRange { what: "revival grid size", value: 0.0 });
    }
    let decays = d_grid.iter().map(|&d| DecayParams::from_degree(d)).collect::<Result<Vec<_>>>()?;
    let classical = T::lit(CLASSICAL_FIDELITY);
    let rows: Vec<Result<Vec<Revival<T>>>> = alpha_grid
        .par_iter()
        .map(|&alpha| {
            let fid = decays
                .iter()
                .map(|dp| mean_fidelity(&TeleportParams::new(alpha_prime, alpha, *dp)?))
                .collect::<Result<Vec<T>>>()?;
            let mut found = Vec::new();
            for j in 0..fid.len() {
                for i in 0..fid.len() {
                    if d_grid[j] > d_grid[i] && fid[j] > fid[i] && fid[j] > classical {
                        found.push(Revival {
                            alpha,
                            d_before: d_grid[i],
                            d_after: d_grid[j],
                            fidelity_before: fid[i],
                            fidelity_after: fid[j],
                        });
                    }
                }
            }
            Ok(found)
        })
        .collect();
    let mut revivals = Vec::new();
    for row in rows {
        revivals.extend(row?);
    }
    Ok(RevivalReport { revivals })
}
