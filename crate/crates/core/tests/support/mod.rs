//! Test-only reference computations that avoid the library's eigensolver.
#![allow(dead_code)]

use ecs_core::entanglement::spin_flip;
use ecs_core::ComplexMatrix;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficients `c[0..=n]` of `det(x I - A)` by Faddeev-LeVerrier.
pub fn char_poly(a: &ComplexMatrix) -> Vec<C> {
    let n = a.rows();
    let mut c = vec![C::new(0.0, 0.0); n + 1];
    c[n] = C::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] += c[n - k + 1];
        }
        m = next;
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    c
}

fn horner(c: &[C], x: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + ck;
    }
    (p, dp)
}

/// All roots of the monic polynomial `c` (lowest degree first).
///
/// Trailing coefficients that are roundoff relative to the root scale are
/// treated as exact zeros, which pins the rank-deficient part of the
/// spectrum at zero.
pub fn poly_roots(c: &[C]) -> Vec<C> {
    let n = c.len() - 1;
    let scale = c[..n].iter().enumerate().map(|(k, ck)| ck.norm().powf(1.0 / (n - k) as f64)).fold(0.0, f64::max);
    let mut zeros = 0;
    while zeros < n && c[zeros].norm() <= 1e-12 * scale.powi((n - zeros) as i32) {
        zeros += 1;
    }
    let reduced = &c[zeros..];
    let mut roots = vec![C::new(0.0, 0.0); zeros];
    let m = reduced.len() - 1;
    match m {
        0 => {}
        1 => roots.push(-reduced[0]),
        2 => {
            let (b, cc) = (reduced[1], reduced[0]);
            let disc = (b * b - 4.0 * cc).sqrt();
            let q = if (b.conj() * disc).re >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
            if q.norm() == 0.0 {
                roots.extend([C::new(0.0, 0.0); 2]);
            } else {
                roots.extend([q, cc / q]);
            }
        }
        _ => {
            // Durand-Kerner, then Newton polish on the reduced polynomial
            let seed = C::new(0.4, 0.9);
            let r = scale.max(1e-300);
            let mut z: Vec<C> = (0..m).map(|k| seed.powu(k as u32) * r).collect();
            for _ in 0..2000 {
                let mut moved = 0.0f64;
                for i in 0..m {
                    let (p, _) = horner(reduced, z[i]);
                    let denom = (0..m).filter(|&j| j != i).fold(C::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
                    let step = p / denom;
                    z[i] -= step;
                    moved = moved.max(step.norm());
                }
                if moved <= 1e-17 * r {
                    break;
                }
            }
            for zi in &mut z {
                for _ in 0..3 {
                    let (p, dp) = horner(reduced, *zi);
                    if dp.norm() > 0.0 {
                        *zi -= p / dp;
                    }
                }
            }
            roots.extend(z);
        }
    }
    roots
}

/// Eigenvalues of a Hermitian matrix, descending, from its characteristic
/// polynomial.
pub fn charpoly_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = poly_roots(&char_poly(h)).iter().map(|z| z.re).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

/// Concurrence from the square roots of the eigenvalues of `rho * rho~`.
pub fn charpoly_concurrence(rho: &ComplexMatrix) -> f64 {
    let r = rho * &spin_flip(rho);
    let mut roots: Vec<f64> = poly_roots(&char_poly(&r)).iter().map(|z| z.re.max(0.0).sqrt()).collect();
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Two-qubit density of rank one or two: a random mixture of two random
/// pure states.
pub fn random_rank2_density(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let normalized = |v: Vec<C>| {
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / n).collect::<Vec<_>>()
    };
    let u = normalized(random_vector(rng, 4));
    let v = normalized(random_vector(rng, 4));
    let w: f64 = if rng.gen_bool(0.1) { 1.0 } else { rng.gen_range(0.0..1.0) };
    &ComplexMatrix::projector(&u).scale_re(w) + &ComplexMatrix::projector(&v).scale_re(1.0 - w)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
