//! Brute-force reference computations in a truncated number basis.
//!
//! Nothing here uses the closed forms of the other modules: states are built
//! from Fock coefficients, decoherence is the Kraus sum of vacuum damping, and
//! the teleportation protocol is simulated by explicit projection.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::DecayParams;
use crate::entanglement::{concurrence, eof_from_concurrence};
use crate::error::{Error, Result};
use crate::linalg::{inner, norm, von_neumann_entropy, Matrix};
use crate::scalar::{Cx, Real};
use crate::states::EcsParams;
use crate::teleportation::TeleportParams;

/// Largest number-basis weight allowed beyond the truncation.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Largest trace lost when projecting onto the encoded two-qubit subspace.
pub const PROJECTION_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_DIM: usize = 32;

/// State vector of one or two modes, each truncated at `dim` levels.
/// Two-mode index `m * dim + n` puts mode 1 first.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<T> {
    dim: usize,
    modes: usize,
    amplitudes: Vec<Cx<T>>,
}

impl<T: Real> FockVector<T> {
    fn normalized(dim: usize, modes: usize, mut amplitudes: Vec<Cx<T>>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::NullState { norm_sq: (n * n).to_f64_lossy() });
        }
        for a in &mut amplitudes {
            *a = a.unscale(n);
        }
        Ok(Self { dim, modes, amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amplitudes(&self) -> &[Cx<T>] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> Cx<T> {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Product state of two single-mode vectors.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.modes != 1 || other.modes != 1 || self.dim != other.dim {
            return Err(Error::DimensionMismatch("tensor needs two single modes of equal dim".into()));
        }
        let mut amps = Vec::with_capacity(self.dim * self.dim);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        Ok(Self { dim: self.dim, modes: 2, amplitudes: amps })
    }

    /// Normalized `a u + b v`.
    pub fn superpose(a: Cx<T>, u: &Self, b: Cx<T>, v: &Self) -> Result<Self> {
        if u.dim != v.dim || u.modes != v.modes {
            return Err(Error::DimensionMismatch("superposed vectors differ in shape".into()));
        }
        let amps = u.amplitudes.iter().zip(&v.amplitudes).map(|(x, y)| a * x + b * y).collect();
        Self::normalized(u.dim, u.modes, amps)
    }
}

/// Poisson weight of levels `>= dim` for mean occupation `nbar`.
fn poisson_tail<T: Real>(nbar: T, dim: usize) -> T {
    let mut log_term = -nbar;
    for k in 1..=dim {
        log_term = log_term + nbar.ln() - T::lit(k as f64).ln();
    }
    let mut total = T::zero();
    let mut k = dim;
    loop {
        let term = log_term.exp();
        total = total + term;
        k += 1;
        if (T::lit(k as f64) > nbar && term <= T::epsilon() * total) || k > dim + 100_000 {
            break;
        }
        log_term = log_term + nbar.ln() - T::lit(k as f64).ln();
    }
    total
}

/// Coherent state `|alpha>` truncated at `dim` levels and renormalized.
pub fn fock_coherent<T: Real>(alpha: Cx<T>, dim: usize) -> Result<FockVector<T>> {
    if dim == 0 {
        return Err(Error::DimensionMismatch("Fock dimension must be positive".into()));
    }
    let nbar = alpha.norm_sqr();
    if !nbar.is_finite() {
        return Err(Error::NotFinite("coherent amplitude"));
    }
    if nbar > T::zero() {
        let tail = poisson_tail(nbar, dim);
        if tail > T::lit(TAIL_TOLERANCE) {
            return Err(Error::TruncationInsufficient { dim, tail: tail.to_f64_lossy() });
        }
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = Cx::from((-nbar / T::lit(2.0)).exp());
    for n in 0..dim {
        amps.push(c);
        c = c * alpha / T::lit((n + 1) as f64).sqrt();
    }
    FockVector::normalized(dim, 1, amps)
}

/// `|C(a1, a2, phi)>` built from truncated coherent states.
pub fn fock_ecs<T: Real>(p: &EcsParams<T>, dim: usize) -> Result<FockVector<T>> {
    let plus = fock_coherent(p.alpha1(), dim)?.tensor(&fock_coherent(p.alpha2(), dim)?)?;
    let minus = fock_coherent(-p.alpha1(), dim)?.tensor(&fock_coherent(-p.alpha2(), dim)?)?;
    FockVector::superpose(Cx::one(), &plus, Cx::from_polar(T::one(), p.phi()), &minus)
}

/// Even or odd cat state of amplitude `alpha`.
fn fock_cat<T: Real>(alpha: Cx<T>, odd: bool, dim: usize) -> Result<FockVector<T>> {
    let sign = if odd { -T::one() } else { T::one() };
    FockVector::superpose(Cx::one(), &fock_coherent(alpha, dim)?, Cx::from(sign), &fock_coherent(-alpha, dim)?)
}

/// Density matrix over one or two truncated modes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockDensity<T> {
    dim: usize,
    modes: usize,
    matrix: Matrix<T>,
}

impl<T: Real> FockDensity<T> {
    pub fn new(dim: usize, modes: usize, matrix: Matrix<T>) -> Result<Self> {
        let total = dim.pow(modes as u32);
        if !(1..=2).contains(&modes) || matrix.rows() != total || matrix.cols() != total {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for {modes} mode(s) of dim {dim}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let tol = T::tol(1e-9);
        let defect = matrix.hermitian_defect();
        if defect > tol {
            return Err(Error::NotHermitian { asymmetry: defect.to_f64_lossy(), allowed: 1e-9 });
        }
        let tr = matrix.trace();
        if (tr - Cx::one()).norm() > tol {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        Ok(Self { dim, modes, matrix })
    }

    pub fn from_pure(v: &FockVector<T>) -> Self {
        Self { dim: v.dim, modes: v.modes, matrix: Matrix::projector(&v.amplitudes) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim_total(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// Population of the highest retained level of `mode`.
    fn top_population(&self, mode: usize) -> T {
        let n = self.dim_total();
        (0..n)
            .filter(|&i| self.level(i, mode) == self.dim - 1)
            .map(|i| self.matrix[(i, i)].re)
            .fold(T::zero(), |a, b| a + b)
    }

    fn level(&self, index: usize, mode: usize) -> usize {
        if self.modes == 1 {
            index
        } else if mode == 0 {
            index / self.dim
        } else {
            index % self.dim
        }
    }
}

/// `sqrt(C(m, n) p^n (1-p)^(m-n))` for `n <= m < dim`: the matrix element
/// `<m-n| K_n |m>` of the `n`-photon-loss Kraus operator.
fn kraus_table<T: Real>(dp: &DecayParams<T>, dim: usize) -> Vec<Vec<T>> {
    let p = dp.degree() * dp.degree();
    let s = dp.survival();
    let ln_fact: Vec<T> = std::iter::once(T::zero())
        .chain((1..dim).scan(T::zero(), |acc, k| {
            *acc = *acc + T::lit(k as f64).ln();
            Some(*acc)
        }))
        .collect();
    (0..dim)
        .map(|m| {
            (0..=m)
                .map(|n| {
                    let lost = n;
                    let kept = m - n;
                    if (lost > 0 && p == T::zero()) || (kept > 0 && s == T::zero()) {
                        return T::zero();
                    }
                    let mut log = ln_fact[m] - ln_fact[lost] - ln_fact[kept];
                    if lost > 0 {
                        log = log + T::lit(lost as f64) * p.ln();
                    }
                    if kept > 0 {
                        log = log + T::lit(kept as f64) * s.ln();
                    }
                    (log / T::lit(2.0)).exp()
                })
                .collect()
        })
        .collect()
}

/// Applies the vacuum-damping Kraus sum to one mode of a dense density matrix.
fn damp_mode<T: Real>(rho: &Matrix<T>, dim: usize, modes: usize, mode: usize, table: &[Vec<T>]) -> Matrix<T> {
    let total = rho.rows();
    let inner_dim = if modes == 2 && mode == 0 { dim } else { 1 };
    // index = hi * (dim * inner_dim) + level * inner_dim + lo
    let split = |i: usize| (i / (dim * inner_dim), (i / inner_dim) % dim, i % inner_dim);
    let join = |hi: usize, level: usize, lo: usize| hi * dim * inner_dim + level * inner_dim + lo;
    let src = rho.as_slice();
    let mut out = Matrix::zeros(total, total);
    let dst = out.as_mut_slice();
    for i in 0..total {
        let (hi, m, lo) = split(i);
        for j in 0..total {
            let (hj, mp, lj) = split(j);
            let value = src[i * total + j];
            if value.is_zero() {
                continue;
            }
            for n in 0..=m.min(mp) {
                let w = table[m][n] * table[mp][n];
                if w == T::zero() {
                    continue;
                }
                let r = join(hi, m - n, lo);
                let c = join(hj, mp - n, lj);
                dst[r * total + c] = dst[r * total + c] + value.scale(w);
            }
        }
    }
    out
}

/// Evolves every mode under vacuum damping through the full Kraus sum.
///
/// All `dim` operators of each mode are applied, so the map is exact on the
/// truncated space; the input must leave the top level of each mode empty.
pub fn kraus_evolve<T: Real>(rho: &FockDensity<T>, dp: &DecayParams<T>) -> Result<FockDensity<T>> {
    for mode in 0..rho.modes {
        let top = rho.top_population(mode);
        if top > T::lit(TAIL_TOLERANCE) {
            return Err(Error::TruncationInsufficient { dim: rho.dim, tail: top.to_f64_lossy() });
        }
    }
    let table = kraus_table(dp, rho.dim);
    let mut m = rho.matrix.clone();
    for mode in 0..rho.modes {
        m = damp_mode(&m, rho.dim, rho.modes, mode, &table);
    }
    Ok(FockDensity { dim: rho.dim, modes: rho.modes, matrix: m })
}

/// Pure-state decomposition `{(K_n1 ⊗ K_n2) psi}` of a damped two-mode state.
pub fn kraus_ensemble<T: Real>(psi: &FockVector<T>, dp: &DecayParams<T>) -> Result<Vec<Vec<Cx<T>>>> {
    if psi.modes != 2 {
        return Err(Error::DimensionMismatch("Kraus ensemble needs a two-mode state".into()));
    }
    let dim = psi.dim;
    let rho_top = |mode: usize| {
        (0..dim)
            .map(|k| {
                let idx = if mode == 0 { (dim - 1) * dim + k } else { k * dim + dim - 1 };
                psi.amplitudes[idx].norm_sqr()
            })
            .fold(T::zero(), |a, b| a + b)
    };
    for mode in 0..2 {
        let top = rho_top(mode);
        if top > T::lit(TAIL_TOLERANCE) {
            return Err(Error::TruncationInsufficient { dim, tail: top.to_f64_lossy() });
        }
    }
    let table = kraus_table(dp, dim);
    let mut out = Vec::new();
    for n1 in 0..dim {
        for n2 in 0..dim {
            let mut v = vec![Cx::zero(); dim * dim];
            let mut any = false;
            for m1 in n1..dim {
                let w1 = table[m1][n1];
                if w1 == T::zero() {
                    continue;
                }
                for m2 in n2..dim {
                    let w = w1 * table[m2][n2];
                    if w == T::zero() {
                        continue;
                    }
                    v[(m1 - n1) * dim + (m2 - n2)] = psi.amplitudes[m1 * dim + m2].scale(w);
                    any = true;
                }
            }
            if any && norm(&v) > T::zero() {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Orthonormal qubit basis `{|a>, (|-a> - <a|-a>|a>)/s}` of one mode.
fn encoded_basis<T: Real>(alpha_t: Cx<T>, dim: usize) -> Result<[FockVector<T>; 2]> {
    let one = fock_coherent(alpha_t, dim)?;
    let minus = fock_coherent(-alpha_t, dim)?;
    let overlap = one.inner(&minus);
    let zero = FockVector::superpose(Cx::one(), &minus, -overlap, &one)?;
    Ok([one, zero])
}

/// A two-mode state restricted to the span of `|±a1(t)>|±a2(t)>`.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedProjection<T> {
    /// Basis order `|11>, |10>, |01>, |00>` with qubit `|1> = |a(t)>`.
    pub matrix: Matrix<T>,
    /// Trace lost by the projection.
    pub defect: T,
}

pub fn project_encoded<T: Real>(
    rho: &FockDensity<T>,
    alpha1_t: Cx<T>,
    alpha2_t: Cx<T>,
) -> Result<EncodedProjection<T>> {
    if rho.modes != 2 {
        return Err(Error::DimensionMismatch("projection needs a two-mode state".into()));
    }
    let b1 = encoded_basis(alpha1_t, rho.dim)?;
    let b2 = encoded_basis(alpha2_t, rho.dim)?;
    let cols: Vec<FockVector<T>> =
        b1.iter().flat_map(|u| b2.iter().map(move |v| u.tensor(v))).collect::<Result<_>>()?;
    let images: Vec<Vec<Cx<T>>> = cols.iter().map(|c| rho.matrix.mul_vec(&c.amplitudes)).collect();
    let matrix = Matrix::from_fn(4, 4, |i, j| inner(&cols[i].amplitudes, &images[j]));
    let defect = (rho.matrix.trace().re - matrix.trace().re).abs();
    Ok(EncodedProjection { matrix, defect })
}

/// Entanglement of formation (bits) of `|C(p)>` after damping `gamma_t`,
/// computed entirely in the truncated number basis.
pub fn oracle_eof<T: Real>(p: &EcsParams<T>, dp: &DecayParams<T>, dim: usize) -> Result<T> {
    let psi = fock_ecs(p, dim)?;
    if dp.gamma_t() == T::zero() {
        // reduced state of mode 1 from the coefficient matrix
        let a = &psi.amplitudes;
        let rho1 = Matrix::from_fn(dim, dim, |m, mp| {
            (0..dim).map(|x| a[m * dim + x] * a[mp * dim + x].conj()).fold(Cx::zero(), |s, z| s + z)
        });
        return von_neumann_entropy(&rho1);
    }
    let evolved = kraus_evolve(&FockDensity::from_pure(&psi), dp)?;
    let f = dp.amplitude_factor();
    let proj = project_encoded(&evolved, p.alpha1().scale(f), p.alpha2().scale(f))?;
    if proj.defect > T::lit(PROJECTION_TOLERANCE) {
        return Err(Error::ProjectionDefect { defect: proj.defect.to_f64_lossy() });
    }
    eof_from_concurrence(concurrence(&proj.matrix)?.concurrence)
}

/// Amplitude carried by the mode-1 cats of Alice's Bell projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode1Cat {
    /// Same amplitude as the input state.
    #[default]
    InputAmplitude,
    /// The decayed channel amplitude `a e^{-gamma t/2}`.
    DecayedChannelAmplitude,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolConfig {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub mode1_cat: Mode1Cat,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self { dim: DEFAULT_DIM, samples: 10_000, seed: 0, mode1_cat: Mode1Cat::InputAmplitude }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolSample<T> {
    pub theta: T,
    pub chi: T,
    /// Probability of the `|Phi+>` outcome for this input.
    pub success_weight: T,
    /// Outcome of a Bernoulli draw with that probability.
    pub success: bool,
    /// Fidelity of Bob's state with the input, given success.
    pub fidelity: T,
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub mean: T,
    pub std_error: T,
}

impl<T: Real> Estimate<T> {
    fn from_values(values: impl Iterator<Item = T> + Clone) -> Self {
        let n = T::lit(values.clone().count() as f64);
        let mean = values.clone().fold(T::zero(), |a, b| a + b) / n;
        let var = values.fold(T::zero(), |a, x| a + (x - mean) * (x - mean)) / (n - T::one()).max(T::one());
        Self { mean, std_error: (var / n).sqrt() }
    }

    /// Distance from `x` in standard errors.
    pub fn sigmas_from(&self, x: T) -> T {
        if self.std_error > T::zero() {
            (self.mean - x).abs() / self.std_error
        } else if self.mean == x {
            T::zero()
        } else {
            T::infinity()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolEstimate<T> {
    /// Fraction of Bernoulli successes.
    pub success_rate: Estimate<T>,
    /// Mean of the per-input success probability.
    pub success_weight: Estimate<T>,
    /// Mean of the success-conditioned fidelity over inputs.
    pub fidelity: Estimate<T>,
    pub samples: Vec<ProtocolSample<T>>,
}

/// Input-independent pieces of the protocol, reduced to the two-dimensional
/// input span `{|a'>, |-a'>}`. Evaluating one input is then a few dozen
/// flops, however large the truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolOracle<T> {
    /// Bob's success weight is `x^† G x`.
    gram: [[Cx<T>; 2]; 2],
    /// `sum_k |<psi|m_k>|^2 = z^T Q conj(z)` with `z[2r+s] = conj(x_r) x_s`.
    quartic: [[Cx<T>; 4]; 4],
    /// Norms of the even and odd input cats before normalization.
    cat_norms: [T; 2],
}

impl<T: Real> ProtocolOracle<T> {
    pub fn new(p: &TeleportParams<T>, dim: usize, mode1_cat: Mode1Cat) -> Result<Self> {
        let ap = Cx::from(p.alpha_prime());
        let inputs = [fock_coherent(ap, dim)?, fock_coherent(-ap, dim)?];
        let bell_amp = match mode1_cat {
            Mode1Cat::InputAmplitude => ap,
            Mode1Cat::DecayedChannelAmplitude => Cx::from(p.alpha() * p.decay().amplitude_factor()),
        };
        let (even_a, odd_a) = (fock_cat(ap, false, dim)?, fock_cat(ap, true, dim)?);
        let (even_1, odd_1) = (fock_cat(bell_amp, false, dim)?, fock_cat(bell_amp, true, dim)?);
        let phi = FockVector::superpose(Cx::one(), &even_a.tensor(&odd_1)?, Cx::one(), &odd_a.tensor(&even_1)?)?;

        // b_s[m] = sum_n conj(Phi[n, m]) f_s[n]
        let contract: Vec<Vec<Cx<T>>> = inputs
            .iter()
            .map(|f| {
                (0..dim)
                    .map(|m| {
                        (0..dim)
                            .map(|n| phi.amplitudes[n * dim + m].conj() * f.amplitudes[n])
                            .fold(Cx::zero(), |a, b| a + b)
                    })
                    .collect()
            })
            .collect();

        let channel = EcsParams::new(Cx::from(p.alpha()), Cx::from(p.alpha()), T::PI())?;
        let ensemble = kraus_ensemble(&fock_ecs(&channel, dim)?, p.decay())?;

        let mut gram = [[Cx::zero(); 2]; 2];
        let mut quartic = [[Cx::zero(); 4]; 4];
        for v in &ensemble {
            // w_s[j] = sum_m b_s[m] v[m, j]
            let w: Vec<Vec<Cx<T>>> = contract
                .iter()
                .map(|b| {
                    let mut out = vec![Cx::zero(); dim];
                    for (m, bm) in b.iter().enumerate() {
                        for (j, o) in out.iter_mut().enumerate() {
                            *o = *o + bm * v[m * dim + j];
                        }
                    }
                    out
                })
                .collect();
            let mut t = [Cx::zero(); 4];
            for r in 0..2 {
                for s in 0..2 {
                    gram[r][s] = gram[r][s] + inner(&w[r], &w[s]);
                    t[2 * r + s] = inner(&inputs[r].amplitudes, &w[s]);
                }
            }
            for i in 0..4 {
                for j in 0..4 {
                    quartic[i][j] = quartic[i][j] + t[i] * t[j].conj();
                }
            }
        }
        let cat_norm = |sign: T| {
            let v: Vec<Cx<T>> =
                inputs[0].amplitudes.iter().zip(&inputs[1].amplitudes).map(|(a, b)| a + b.scale(sign)).collect();
            norm(&v)
        };
        Ok(Self { gram, quartic, cat_norms: [cat_norm(T::one()), cat_norm(-T::one())] })
    }

    /// Success weight and conditional fidelity for the input
    /// `A+ |psi+> + A- |psi->` (normalized by the caller).
    pub fn outcome(&self, a_plus: Cx<T>, a_minus: Cx<T>) -> (T, T) {
        let (e, o) = (a_plus.unscale(self.cat_norms[0]), a_minus.unscale(self.cat_norms[1]));
        let x = [e + o, e - o];
        let mut weight = Cx::<T>::zero();
        for r in 0..2 {
            for s in 0..2 {
                weight = weight + x[r].conj() * self.gram[r][s] * x[s];
            }
        }
        let z: Vec<Cx<T>> = (0..4).map(|i| x[i / 2].conj() * x[i % 2]).collect();
        let mut num = Cx::<T>::zero();
        for i in 0..4 {
            for j in 0..4 {
                num = num + z[i] * self.quartic[i][j] * z[j].conj();
            }
        }
        (weight.re, num.re / weight.re)
    }
}

/// Monte-Carlo simulation of the one-bit teleportation protocol.
///
/// Inputs are uniform on the Bloch sphere of the even/odd cat qubit. Sample
/// `i` draws from ChaCha8 seeded with `seed` on stream `i`, so results do not
/// depend on the thread count.
pub fn simulate_protocol<T: Real>(p: &TeleportParams<T>, cfg: &ProtocolConfig) -> Result<ProtocolEstimate<T>> {
    if cfg.samples < 100 {
        return Err(Error::OutOfRange { what: "sample count", value: cfg.samples as f64 });
    }
    let oracle = ProtocolOracle::new(p, cfg.dim, cfg.mode1_cat)?;
    let samples: Vec<ProtocolSample<T>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let cos_theta = T::lit(2.0 * rng.gen::<f64>() - 1.0);
            let chi = T::lit(std::f64::consts::TAU * rng.gen::<f64>());
            let u = T::lit(rng.gen::<f64>());
            let theta = cos_theta.acos();
            let half = theta / T::lit(2.0);
            let a_plus = Cx::from(half.cos());
            let a_minus = Cx::from_polar(half.sin(), chi);
            let (success_weight, fidelity) = oracle.outcome(a_plus, a_minus);
            ProtocolSample { theta, chi, success_weight, success: u < success_weight, fidelity }
        })
        .collect();
    let flag = |s: &ProtocolSample<T>| if s.success { T::one() } else { T::zero() };
    Ok(ProtocolEstimate {
        success_rate: Estimate::from_values(samples.iter().map(flag)),
        success_weight: Estimate::from_values(samples.iter().map(|s| s.success_weight)),
        fidelity: Estimate::from_values(samples.iter().map(|s| s.fidelity)),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::decay_params;
    use crate::states::coherent_overlap;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn coherent_examples() {
        let vac = fock_coherent(Cx::<f64>::zero(), 32).unwrap();
        assert_eq!(vac.amplitudes()[0], Cx::one());
        assert!(vac.amplitudes()[1..].iter().all(|z| z.is_zero()));
        let a = fock_coherent(Cx::from(0.5), 32).unwrap();
        let b = fock_coherent(Cx::from(-0.5), 32).unwrap();
        assert!((a.inner(&b).re - (-0.5f64).exp()).abs() < 1e-12);
        assert!(matches!(fock_coherent(Cx::from(3.0), 8), Err(Error::TruncationInsufficient { .. })));
        // Poisson tail of |3|^2 beyond 32 levels is ~2e-9
        assert!(matches!(fock_coherent(Cx::from(3.0), 32), Err(Error::TruncationInsufficient { .. })));
        assert!(fock_coherent(Cx::from(3.0), 48).is_ok());
    }

    #[test]
    fn overlaps_match_closed_form() {
        let pts = [Cx::new(0.3, -0.4), Cx::new(-1.1, 0.2), Cx::new(2.0, 0.5)];
        for a in pts {
            for b in pts {
                let f = fock_coherent(a, 40).unwrap().inner(&fock_coherent(b, 40).unwrap());
                assert!((f - coherent_overlap(a, b).unwrap()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn kraus_trivial_cases() {
        let p = EcsParams::real(0.5, 0.5, PI).unwrap();
        let rho = FockDensity::from_pure(&fock_ecs(&p, 12).unwrap());
        let same = kraus_evolve(&rho, &DecayParams::none()).unwrap();
        assert!((same.matrix() - rho.matrix()).max_abs() < 1e-15);

        let vac = fock_coherent(Cx::<f64>::zero(), 6).unwrap();
        let rho = FockDensity::from_pure(&vac.tensor(&vac).unwrap());
        for g in [0.1, 2.0, 50.0] {
            let out = kraus_evolve(&rho, &decay_params(g).unwrap()).unwrap();
            assert!((out.matrix() - rho.matrix()).max_abs() < 1e-15);
        }
    }

    #[test]
    fn kraus_preserves_trace_and_composes() {
        let p = EcsParams::real(0.7, 0.4, 1.0).unwrap();
        let rho = FockDensity::from_pure(&fock_ecs(&p, 14).unwrap());
        let (a, b) = (decay_params(0.3).unwrap(), decay_params(0.5).unwrap());
        let once = kraus_evolve(&rho, &a.then(&b)).unwrap();
        let twice = kraus_evolve(&kraus_evolve(&rho, &a).unwrap(), &b).unwrap();
        assert!(f64::abs(once.matrix().trace().re - 1.0) < 1e-10);
        assert!((once.matrix() - twice.matrix()).max_abs() < 1e-12);
        FockDensity::new(14, 2, once.matrix().clone()).unwrap();
    }

    #[test]
    fn full_decay_is_vacuum() {
        let p = EcsParams::real(0.6, 0.6, PI).unwrap();
        let rho = FockDensity::from_pure(&fock_ecs(&p, 12).unwrap());
        let out = kraus_evolve(&rho, &DecayParams::from_degree(1.0).unwrap()).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ensemble_reproduces_density() {
        let p = EcsParams::real(0.5, 0.8, 0.4).unwrap();
        let psi = fock_ecs(&p, 14).unwrap();
        let dp = decay_params(0.7).unwrap();
        let rho = kraus_evolve(&FockDensity::from_pure(&psi), &dp).unwrap();
        let mut sum = Matrix::zeros(196, 196);
        for v in kraus_ensemble(&psi, &dp).unwrap() {
            sum = &sum + &Matrix::outer(&v, &v);
        }
        assert!((&sum - rho.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn oracle_eof_examples() {
        let maximal = EcsParams::real(0.5, 0.5, PI).unwrap();
        assert!((oracle_eof(&maximal, &DecayParams::none(), 32).unwrap() - 1.0).abs() < 1e-8);
        let even = EcsParams::real(0.5, 0.5, 0.0).unwrap();
        assert!(f64::abs(oracle_eof(&even, &DecayParams::none(), 32).unwrap() - 0.313_759_321_215_989_7) < 1e-10);
    }

    #[test]
    fn protocol_rejects_bad_config() {
        let p = TeleportParams::new(1.0, 1.0, DecayParams::none()).unwrap();
        let cfg = ProtocolConfig { samples: 10, ..ProtocolConfig::default() };
        assert!(matches!(simulate_protocol(&p, &cfg), Err(Error::OutOfRange { .. })));
        let p = TeleportParams::new(1.0, 3.0, DecayParams::none()).unwrap();
        let cfg = ProtocolConfig { samples: 100, ..ProtocolConfig::default() };
        assert!(matches!(simulate_protocol(&p, &cfg), Err(Error::TruncationInsufficient { .. })));
    }

    #[test]
    fn protocol_is_deterministic() {
        let p = TeleportParams::new(1.0, 1.0, decay_params(LN_2).unwrap()).unwrap();
        let cfg = ProtocolConfig { dim: 20, samples: 500, seed: 11, ..ProtocolConfig::default() };
        let a = simulate_protocol(&p, &cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| simulate_protocol(&p, &cfg).unwrap());
        assert_eq!(a, b);
        let c = simulate_protocol(&p, &ProtocolConfig { seed: 12, ..cfg }).unwrap();
        assert_ne!(a.samples[0], c.samples[0]);
    }
}
