//! Small dense complex-matrix kernel.
//!
//! Everything here is sized for the problems in this crate: 2x2 and 4x4
//! qubit matrices, 32x32 single-mode Fock blocks and the occasional few
//! hundred dimensional Gram matrix. Eigenproblems are solved with cyclic
//! complex Jacobi rotations, which are slow asymptotically but accurate for
//! tiny eigenvalues, the regime that matters for entropies and concurrence.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cx, is_finite_cx, re, Cx, Real};

const MAX_SWEEPS: usize = 100;

/// Negative eigenvalues above `-PSD_CLAMP` are treated as roundoff and set to zero.
pub const PSD_CLAMP: f64 = 1e-8;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Cx::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if !data.iter().all(|z| is_finite_cx(*z)) {
            return Err(Error::NotFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = re(d);
        }
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[Cx<T>], v: &[Cx<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Projector `|u><u|`.
    pub fn projector(u: &[Cx<T>]) -> Self {
        Self::outer(u, u)
    }

    /// Pauli `sigma_y`.
    pub fn sigma_y() -> Self {
        let z = Cx::zero();
        Self { rows: 2, cols: 2, data: vec![z, cx(T::zero(), -T::one()), cx(T::zero(), T::one()), z] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Cx<T>] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cx<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| *z * s).collect() }
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(re(s))
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(Cx::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// `||H - H^dagger||_F`.
    pub fn hermitian_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let n = self.rows;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| is_finite_cx(*z))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| self[(i / r2, j / c2)] * other[(i % r2, j % c2)])
    }

    pub fn mul_vec(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(Cx::zero(), |acc, (a, b)| acc + *a * *b)).collect()
    }

    /// `<u|M|v>`.
    pub fn sandwich(&self, u: &[Cx<T>], v: &[Cx<T>]) -> Cx<T> {
        inner(u, &self.mul_vec(v))
    }

    fn symmetrized(&self) -> Self {
        let n = self.rows;
        let half = T::lit(0.5);
        let mut m = Self::from_fn(n, n, |i, j| (self[(i, j)] + self[(j, i)].conj()).scale(half));
        for i in 0..n {
            m[(i, i)].im = T::zero();
        }
        m
    }

    fn off_diagonal_norm(&self) -> T {
        let n = self.rows;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc = acc + self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = Cx<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(rhs.row(k)) {
                    *d = *d + a * *b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols.max(1)) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:?}{:+?}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `<u|v>`, conjugate-linear in the first argument.
pub fn inner<T: Real>(u: &[Cx<T>], v: &[Cx<T>]) -> Cx<T> {
    assert_eq!(u.len(), v.len(), "inner product dimension mismatch");
    u.iter().zip(v).fold(Cx::zero(), |acc, (a, b)| acc + a.conj() * *b)
}

pub fn norm<T: Real>(u: &[Cx<T>]) -> T {
    u.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Vector Kronecker product.
pub fn kron_vec<T: Real>(u: &[Cx<T>], v: &[Cx<T>]) -> Vec<Cx<T>> {
    u.iter().flat_map(|a| v.iter().map(move |b| *a * *b)).collect()
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Spectrum<T> {
    /// Sorted in descending order.
    pub eigenvalues: Vec<T>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Matrix<T>,
}

impl<T: Real> Spectrum<T> {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn map_reconstruct(&self, mut f: impl FnMut(T) -> T) -> Matrix<T> {
        let v = &self.eigenvectors;
        let n = v.rows();
        let w: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        Matrix::from_fn(n, n, |i, j| (0..w.len()).fold(Cx::zero(), |acc, k| acc + v[(i, k)] * v[(j, k)].conj() * w[k]))
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.map_reconstruct(|l| l)
    }
}

fn check_hermitian<T: Real>(h: &Matrix<T>) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!("expected square matrix, got {}x{}", h.rows, h.cols)));
    }
    if !h.is_finite() {
        return Err(Error::NotFinite("Hermitian input"));
    }
    let allowed = T::tol(1e-10) * h.frobenius_norm().max(T::one());
    let asymmetry = h.hermitian_defect();
    if asymmetry > allowed {
        return Err(Error::NotHermitian { asymmetry: asymmetry.to_f64_lossy(), allowed: allowed.to_f64_lossy() });
    }
    Ok(())
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the classical real symmetric rotation. Iteration
/// stops once the off-diagonal Frobenius norm drops below `1e-13 ||H||_F`.
pub fn hermitian_eig<T: Real>(h: &Matrix<T>) -> Result<Spectrum<T>> {
    check_hermitian(h)?;
    let n = h.rows;
    let mut a = h.symmetrized();
    let mut v = Matrix::identity(n);
    let target = T::tol(1e-13) * a.frobenius_norm();
    let two = T::lit(2.0);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if a.off_diagonal_norm() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let phase = apq.unscale(mag);
                let theta = (a[(q, q)].re - a[(p, p)].re) / (two * mag);
                let t = if theta >= T::zero() {
                    T::one() / (theta + theta.hypot(T::one()))
                } else {
                    -T::one() / (-theta + theta.hypot(T::one()))
                };
                let c = T::one() / t.hypot(T::one());
                let s = t * c;
                let (u_pp, u_pq) = (re(c), re(s));
                let (u_qp, u_qq) = (phase.conj() * (-s), phase.conj() * c);

                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = Cx::zero();
                a[(q, p)] = Cx::zero();
                a[(p, p)].im = T::zero();
                a[(q, q)].im = T::zero();
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }
    if !converged && a.off_diagonal_norm() > target {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Clamps a PSD spectrum: values in `[-PSD_CLAMP, 0)` and values below the
/// numerical rank cut `n eps max|lambda|` become exactly zero.
pub(crate) fn clamp_psd_spectrum<T: Real>(eigenvalues: &[T]) -> Result<Vec<T>> {
    let min = eigenvalues.iter().copied().fold(T::infinity(), T::min);
    if min < -T::tol(PSD_CLAMP) {
        return Err(Error::NotPsd { min_eigenvalue: min.to_f64_lossy() });
    }
    let scale = eigenvalues.iter().map(|l| l.abs()).fold(T::zero(), T::max);
    let cut = T::epsilon() * T::lit(4.0 * eigenvalues.len().max(1) as f64) * scale;
    Ok(eigenvalues.iter().map(|&l| if l <= cut { T::zero() } else { l }).collect())
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn psd_sqrt<T: Real>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let mut spec = hermitian_eig(m)?;
    spec.eigenvalues = clamp_psd_spectrum(&spec.eigenvalues)?;
    Ok(spec.map_reconstruct(|l| l.sqrt()))
}

/// Which factor of a bipartite space to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of a `d1 d2 x d1 d2` operator, keeping `keep`.
pub fn partial_trace<T: Real>(rho: &Matrix<T>, dims: (usize, usize), keep: Subsystem) -> Result<Matrix<T>> {
    let (d1, d2) = dims;
    if rho.rows != d1 * d2 || rho.cols != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} operator cannot be split as {d1} x {d2}",
            rho.rows, rho.cols
        )));
    }
    let out = match keep {
        Subsystem::First => {
            Matrix::from_fn(d1, d1, |i, k| (0..d2).fold(Cx::zero(), |acc, j| acc + rho[(i * d2 + j, k * d2 + j)]))
        }
        Subsystem::Second => {
            Matrix::from_fn(d2, d2, |j, l| (0..d1).fold(Cx::zero(), |acc, i| acc + rho[(i * d2 + j, i * d2 + l)]))
        }
    };
    Ok(out)
}

/// Shannon entropy in bits of a probability vector, with `0 log 0 = 0`.
pub fn entropy_bits<T: Real>(probs: &[T]) -> T {
    probs.iter().filter(|&&p| p > T::zero()).map(|&p| -p * p.log2()).sum()
}

/// Von Neumann entropy `-Tr rho log2 rho` in bits.
pub fn von_neumann_entropy<T: Real>(rho: &Matrix<T>) -> Result<T> {
    let spec = hermitian_eig(rho)?;
    let lambdas = clamp_psd_spectrum(&spec.eigenvalues).map_err(|e| Error::NotDensityMatrix(e.to_string()))?;
    let hi = T::one() + T::tol(1e-10);
    if let Some(l) = lambdas.iter().find(|&&l| l > hi) {
        return Err(Error::NotDensityMatrix(format!("eigenvalue {l} exceeds 1")));
    }
    let total: T = lambdas.iter().copied().sum();
    if (total - T::one()).abs() > T::tol(1e-8) {
        return Err(Error::NotDensityMatrix(format!("trace {total} differs from 1")));
    }
    Ok(entropy_bits(&lambdas))
}
