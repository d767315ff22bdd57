use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use ecs_core::channels::{decay_params, evolve_ecs, two_qubit_density};
use ecs_core::entanglement::mixed_ecs_eof;
use ecs_core::linalg::{partial_trace, von_neumann_entropy, Subsystem};
use ecs_core::oracle::{
    fock_coherent, fock_ecs, kraus_evolve, oracle_eof, project_encoded, simulate_protocol, FockDensity, FockVector,
    Mode1Cat, ProtocolConfig, ProtocolOracle,
};
use ecs_core::states::cat_normalization;
use ecs_core::teleportation::{bell_states, intermediates, BellKind};
use ecs_core::{Complex, DecayParams, EcsParams, Error, TeleportParams};

const E_STAR: f64 = 0.529_538_988_626_836_5;

fn cx(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

#[test]
fn maximal_ecs_reduced_entropy_is_one_bit() {
    let psi = fock_ecs(&EcsParams::real(0.5, 0.5, PI).unwrap(), 32).unwrap();
    let rho = FockDensity::from_pure(&psi);
    let reduced = partial_trace(rho.matrix(), (32, 32), Subsystem::Second).unwrap();
    assert!((von_neumann_entropy(&reduced).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn projected_fock_state_matches_two_qubit_density() {
    let p = EcsParams::real(0.5, 0.5, PI).unwrap();
    let dp = DecayParams::from_degree(0.5).unwrap();
    let evolved = kraus_evolve(&FockDensity::from_pure(&fock_ecs(&p, 32).unwrap()), &dp).unwrap();
    let e = evolve_ecs(&p, &dp);
    let proj = project_encoded(&evolved, e.alpha1_t, e.alpha2_t).unwrap();
    assert!(proj.defect < 1e-9);
    let closed = two_qubit_density(&e).unwrap();
    assert!((&proj.matrix - &closed).max_abs() < 1e-8);
}

#[test]
fn decayed_eof_matches_oracle() {
    let p = EcsParams::real(0.5, 0.5, PI).unwrap();
    let dp = DecayParams::from_degree(0.5).unwrap();
    let closed = mixed_ecs_eof(&p, &dp).unwrap();
    assert!((closed - E_STAR).abs() < 1e-9, "{closed}");
    assert!((oracle_eof(&p, &dp, 32).unwrap() - closed).abs() < 1e-6);

    let dp = decay_params(LN_2).unwrap();
    assert!((oracle_eof(&p, &dp, 32).unwrap() - mixed_ecs_eof(&p, &dp).unwrap()).abs() < 1e-6);
}

#[test]
fn kraus_sum_matches_closed_form_coefficients() {
    let p = EcsParams::real(0.5, 0.5, PI).unwrap();
    let dp = decay_params(LN_2).unwrap();
    let e = evolve_ecs(&p, &dp);
    assert!((e.beta12 - cx(-(-0.5f64).exp())).norm() < 1e-15);
    let rho = kraus_evolve(&FockDensity::from_pure(&fock_ecs(&p, 32).unwrap()), &dp).unwrap();
    assert!((rho.matrix().trace().re - 1.0).abs() < 1e-10);
    let kets: Vec<[Complex; 2]> =
        [1.0, -1.0].iter().flat_map(|&s| [1.0, -1.0].map(|t| [e.alpha1_t * s, e.alpha2_t * t])).collect();
    let fock = |k: &[Complex; 2]| fock_coherent(k[0], 32).unwrap().tensor(&fock_coherent(k[1], 32).unwrap()).unwrap();
    for l in &kets {
        for r in &kets {
            let numeric = rho.matrix().sandwich(fock(l).amplitudes(), fock(r).amplitudes());
            let closed = e.sandwich(*l, *r).unwrap();
            assert!((numeric - closed).norm() < 1e-8);
        }
    }
}

#[test]
fn cat_states_are_normalized_in_fock_space() {
    for a in [0.3, 1.0, 2.2] {
        let c = cat_normalization(cx(a)).unwrap();
        let (f, g) = (fock_coherent(cx(a), 40).unwrap(), fock_coherent(cx(-a), 40).unwrap());
        let even: Vec<Complex> = f.amplitudes().iter().zip(g.amplitudes()).map(|(x, y)| (x + y) * c.n_plus).collect();
        let odd: Vec<Complex> = f.amplitudes().iter().zip(g.amplitudes()).map(|(x, y)| (x - y) * c.n_minus).collect();
        assert!((ecs_core::linalg::norm(&even) - 1.0).abs() < 1e-12);
        assert!((ecs_core::linalg::norm(&odd) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bell_states_agree_with_fock_construction() {
    let (aa, ab) = (1.0, 0.8);
    let basis = bell_states(aa, ab).unwrap();
    let dim = 32;
    let coh = |x: f64| fock_coherent(cx(x), dim).unwrap();
    let embed = |c: &[[f64; 2]; 2]| {
        let mut v = vec![Complex::new(0.0, 0.0); dim * dim];
        for (s, sa) in [aa, -aa].iter().enumerate() {
            for (t, tb) in [ab, -ab].iter().enumerate() {
                let prod = coh(*sa).tensor(&coh(*tb)).unwrap();
                for (vi, pi) in v.iter_mut().zip(prod.amplitudes()) {
                    *vi += pi * c[s][t];
                }
            }
        }
        v
    };
    let vecs: Vec<Vec<Complex>> = basis.states.iter().map(|b| embed(&b.coeffs)).collect();
    for i in 0..4 {
        for j in 0..4 {
            let g = ecs_core::linalg::inner(&vecs[i], &vecs[j]);
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((g - cx(expected)).norm() < 1e-12);
        }
    }
    // |Phi+> from independently normalized number-basis cats
    let cat = |x: f64, sign: f64| FockVector::superpose(cx(1.0), &coh(x), cx(sign), &coh(-x)).unwrap();
    let phi = FockVector::superpose(
        cx(1.0),
        &cat(aa, 1.0).tensor(&cat(ab, -1.0)).unwrap(),
        cx(1.0),
        &cat(aa, -1.0).tensor(&cat(ab, 1.0)).unwrap(),
    )
    .unwrap();
    let idx = basis.states.iter().position(|b| b.kind == BellKind::PhiPlus).unwrap();
    let overlap = ecs_core::linalg::inner(phi.amplitudes(), &vecs[idx]);
    assert!((overlap.norm() - 1.0).abs() < 1e-10);
}

/// Success weight and conditional fidelity for input weight `t = |A+|^2`,
/// from the closed-form intermediates.
fn conditional(p: &TeleportParams, t: f64) -> (f64, f64) {
    let k = intermediates(p).unwrap();
    let s = 1.0 - t;
    let (mu, nu, b) = (k.mu, k.nu, k.beta);
    let den = t * k.a() + s * k.b();
    let num = 2.0 * (t * nu + s * mu) * (t * mu + s * nu)
        + 4.0 * t * s * mu * nu
        + 2.0 * b * ((s * mu - t * nu) * (t * mu - s * nu) - 2.0 * t * s * mu * nu);
    (4.0 * k.n_alpha_sq * k.envelope * den, 2.0 * k.envelope * num / den)
}

#[test]
fn protocol_outcomes_match_closed_form_conditionals() {
    for (ap, a, g) in [(1.0, 1.0, LN_2), (0.7, 1.3, 0.4), (1.5, 0.9, 2.0)] {
        let p = TeleportParams::new(ap, a, decay_params(g).unwrap()).unwrap();
        let oracle = ProtocolOracle::new(&p, 32, Mode1Cat::InputAmplitude).unwrap();
        for t in [0.0, 0.13, 0.5, 0.77, 1.0] {
            let (w, f) = conditional(&p, t);
            // the fidelity is a trigonometric polynomial of degree 2 in the
            // relative input phase, so 8 equispaced phases average it exactly
            let mut mean = 0.0;
            for k in 0..8 {
                let chi = std::f64::consts::TAU * k as f64 / 8.0;
                let (weight, fid) = oracle.outcome(cx(t.sqrt()), Complex::from_polar((1.0 - t).sqrt(), chi));
                assert!((weight - w).abs() < 1e-9, "{ap} {a} {g} {t}: weight {weight} vs {w}");
                mean += fid / 8.0;
            }
            assert!((mean - f).abs() < 1e-9, "{ap} {a} {g} {t}: fidelity {mean} vs {f}");
        }
    }
}

#[test]
fn sampled_inputs_follow_the_oracle() {
    let p = TeleportParams::new(1.0, 1.0, decay_params(LN_2).unwrap()).unwrap();
    let cfg = ProtocolConfig { dim: 32, samples: 200, seed: 5, mode1_cat: Mode1Cat::InputAmplitude };
    let est = simulate_protocol(&p, &cfg).unwrap();
    let oracle = ProtocolOracle::new(&p, 32, Mode1Cat::InputAmplitude).unwrap();
    for s in &est.samples {
        let (h, chi) = (s.theta / 2.0, s.chi);
        let expected = oracle.outcome(cx(h.cos()), Complex::from_polar(h.sin(), chi));
        assert_eq!((s.success_weight, s.fidelity), expected);
        assert!((0.0..=1.0 + 1e-9).contains(&s.fidelity));
    }
}

#[test]
fn decayed_bell_amplitude_breaks_success_formula() {
    let p = TeleportParams::new(1.0, 1.0, decay_params(LN_2).unwrap()).unwrap();
    let cfg = ProtocolConfig { dim: 32, samples: 200, seed: 5, mode1_cat: Mode1Cat::DecayedChannelAmplitude };
    let est = simulate_protocol(&p, &cfg).unwrap();
    let worst = est
        .samples
        .iter()
        .map(|s| (s.success_weight - conditional(&p, (s.theta / 2.0).cos().powi(2)).0).abs())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3, "max deviation {worst}");
}

#[test]
fn evolution_refuses_populated_top_level() {
    let psi = fock_ecs(&EcsParams::real(2.0, 2.0, FRAC_PI_2).unwrap(), 40).unwrap();
    assert!(kraus_evolve(&FockDensity::from_pure(&psi), &decay_params(0.1).unwrap()).is_ok());
    let top = fock_coherent(cx(0.0), 6).unwrap();
    let mut amps = vec![Complex::new(0.0, 0.0); 6];
    amps[5] = cx(1.0);
    let excited = FockVector::superpose(cx(1.0), &top, cx(1.0), &top).unwrap();
    assert_eq!(excited.amplitudes()[0], cx(1.0));
    let bad = ecs_core::ComplexMatrix::projector(&amps);
    let rho = FockDensity::new(6, 1, bad).unwrap();
    assert!(matches!(kraus_evolve(&rho, &decay_params(0.3).unwrap()), Err(Error::TruncationInsufficient { .. })));
}
