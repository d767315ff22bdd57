//! Acceptance suite: one line per criterion, non-zero exit if a blocking
//! criterion fails. Run with `cargo test -p ecs-core --test acceptance`;
//! positional arguments select criteria by number.

mod support;

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use ecs_core::channels::{decay_params, evolve_ecs};
use ecs_core::entanglement::{concurrence, mixed_ecs_eof, phase_sensitivity, pure_ecs_eigenvalues};
use ecs_core::oracle::{
    fock_coherent, fock_ecs, kraus_evolve, oracle_eof, simulate_protocol, FockDensity, ProtocolConfig,
};
use ecs_core::teleportation::{mean_fidelity, revival_search, success_probability, CLASSICAL_FIDELITY};
use ecs_core::{Complex, DecayParams, EcsParams, TeleportParams};
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn maximal_entanglement() -> Outcome {
    let mut worst_e = 0.0f64;
    let mut worst_lambda = 0.0f64;
    for a in [0.3, 0.5, 1.0, 2.0] {
        let r = pure_ecs_eigenvalues(&EcsParams::real(a, a, PI).unwrap());
        worst_e = worst_e.max((r.eof_bits - 1.0).abs());
        worst_lambda = worst_lambda.max((r.lambda_plus - 0.5).abs()).max((r.lambda_minus - 0.5).abs());
    }
    outcome(
        worst_e <= 1e-12 && worst_lambda <= 1e-15,
        format!("max |E - 1| = {worst_e:.2e}, max |lambda - 1/2| = {worst_lambda:.2e}"),
    )
}

fn pure_limit() -> Outcome {
    let mut worst = 0.0f64;
    for a1 in [0.2, 0.5, 1.0] {
        for a2 in [0.2, 0.5, 1.0] {
            for phi in [0.0, FRAC_PI_2, PI] {
                let p = EcsParams::real(a1, a2, phi).unwrap();
                let mixed = mixed_ecs_eof(&p, &DecayParams::none()).unwrap();
                worst = worst.max((mixed - pure_ecs_eigenvalues(&p).eof_bits).abs());
            }
        }
    }
    outcome(worst <= 1e-9, format!("max deviation {worst:.2e} over 27 points"))
}

fn oracle_equivalence() -> Outcome {
    let mut grid = Vec::new();
    for a in [0.2, 0.5, 1.0, 1.5] {
        for phi in [0.0, FRAC_PI_2, PI] {
            for d in [0.0, 0.3, 0.5, 0.8] {
                grid.push((a, phi, d));
            }
        }
    }
    let diffs: Vec<Result<f64, String>> = grid
        .par_iter()
        .map(|&(a, phi, d)| {
            let p = EcsParams::real(a, a, phi).map_err(|e| e.to_string())?;
            let dp = DecayParams::from_degree(d).map_err(|e| e.to_string())?;
            let fock = oracle_eof(&p, &dp, 32).map_err(|e| format!("({a}, {phi:.4}, {d}): {e}"))?;
            Ok((fock - mixed_ecs_eof(&p, &dp).map_err(|e| e.to_string())?).abs())
        })
        .collect();
    let mut worst = 0.0f64;
    for d in diffs {
        match d {
            Ok(x) => worst = worst.max(x),
            Err(e) => return outcome(false, format!("oracle error {e}")),
        }
    }
    outcome(worst <= 1e-6, format!("max |E_fock - E| = {worst:.2e} over {} points, N = 32", grid.len()))
}

fn kraus_channel() -> Outcome {
    let states = [
        EcsParams::real(0.5, 0.5, PI).unwrap(),
        EcsParams::real(1.0, 0.7, PI / 3.0).unwrap(),
        EcsParams::real(0.8, 1.2, 0.0).unwrap(),
        EcsParams::new(Complex::new(0.6, 0.3), Complex::new(-0.4, 0.5), 1.0).unwrap(),
    ];
    let mut cases = Vec::new();
    for g in [LN_2, 2.0] {
        for p in &states {
            cases.push((*p, g));
        }
    }
    let worst = cases
        .par_iter()
        .map(|(p, g)| {
            let dp = decay_params(*g).unwrap();
            let e = evolve_ecs(p, &dp);
            let rho = kraus_evolve(&FockDensity::from_pure(&fock_ecs(p, 32).unwrap()), &dp).unwrap();
            let kets: Vec<[Complex; 2]> =
                [1.0, -1.0].iter().flat_map(|&s| [1.0, -1.0].map(|t| [e.alpha1_t * s, e.alpha2_t * t])).collect();
            let fock =
                |k: &[Complex; 2]| fock_coherent(k[0], 32).unwrap().tensor(&fock_coherent(k[1], 32).unwrap()).unwrap();
            let mut worst = (rho.matrix().trace().re - 1.0).abs();
            for l in &kets {
                for r in &kets {
                    let numeric = rho.matrix().sandwich(fock(l).amplitudes(), fock(r).amplitudes());
                    worst = worst.max((numeric - e.sandwich(*l, *r).unwrap()).norm());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    outcome(worst <= 1e-8, format!("max element deviation {worst:.2e} over {} evolutions", cases.len()))
}

fn protocol_anchors() -> Outcome {
    let mut worst_p = 0.0f64;
    let mut worst_f = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        let p = TeleportParams::new(a, a, DecayParams::none()).unwrap();
        worst_p = worst_p.max((success_probability(&p).unwrap() - 0.25).abs());
        worst_f = worst_f.max((mean_fidelity(&p).unwrap() - 1.0).abs());
    }
    outcome(worst_p <= 1e-9 && worst_f <= 1e-6, format!("max |P_s - 1/4| = {worst_p:.2e}, max |F - 1| = {worst_f:.2e}"))
}

fn perfect_teleportation() -> Outcome {
    let p = TeleportParams::new(1.0, 1.0, DecayParams::none()).unwrap();
    let cfg = ProtocolConfig { dim: 32, samples: 10_000, seed: 42, ..ProtocolConfig::default() };
    let est = simulate_protocol(&p, &cfg).unwrap();
    let worst = est.samples.iter().map(|s| (s.fidelity - 1.0).abs()).fold(0.0, f64::max);
    let sigmas = est.success_rate.sigmas_from(0.25);
    outcome(
        worst <= 1e-8 && sigmas <= 3.0,
        format!(
            "max |F - 1| = {worst:.2e} over {} samples, success rate {:.4} +- {:.4} ({sigmas:.2} sigma from 1/4)",
            est.samples.len(),
            est.success_rate.mean,
            est.success_rate.std_error
        ),
    )
}

fn fidelity_revival() -> Outcome {
    let alphas: Vec<f64> = (1..=30).map(|i| i as f64 * 0.1).collect();
    let ds: Vec<f64> = (0..=19).map(|i| i as f64 * 0.05).collect();
    let report = revival_search(1.0, &alphas, &ds).unwrap();
    if let Some(best) = report.best() {
        return outcome(
            true,
            format!(
                "{} revivals; best F = {:.6} at |alpha| = {:.1}, d {:.2} -> {:.2}",
                report.revivals.len(),
                best.fidelity_after,
                best.alpha,
                best.d_before,
                best.d_after
            ),
        );
    }
    // Locate what the grid steps over, for the record.
    let fine: Vec<f64> = (100..=200).map(|i| i as f64 * 0.01).collect();
    let fine_report = revival_search(1.0, &fine, &ds).unwrap();
    let window: Vec<f64> = fine_report.revivals.iter().map(|r| r.alpha).collect();
    let lo = window.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let peak = fine_report.best().map(|b| b.fidelity_after).unwrap_or(f64::NAN);
    let f15: Vec<f64> = ds
        .iter()
        .map(|&d| mean_fidelity(&TeleportParams::new(1.0, 1.5, DecayParams::from_degree(d).unwrap()).unwrap()).unwrap())
        .collect();
    // highest fidelity reached after a dip, ignoring the classical limit
    let at_15 =
        (1..f15.len()).filter(|&j| f15[..j].iter().any(|&fi| fi < f15[j])).map(|j| f15[j]).fold(f64::NAN, f64::max);
    outcome(
        false,
        format!(
            "no revival above {CLASSICAL_FIDELITY:.4} on the 0.1 |alpha| grid; \
             a 0.01 grid finds revivals only for |alpha| in [{lo:.2}, {hi:.2}] (peak F = {peak:.4}); \
             best revived F at |alpha| = 1.5 is {at_15:.4}"
        ),
    )
}

fn phase_sensitivity_ordering() -> Outcome {
    let dp = DecayParams::from_degree(0.3).unwrap();
    let small = phase_sensitivity(0.2, &dp, 100).unwrap().relative_range;
    let large = phase_sensitivity(0.5, &dp, 100).unwrap().relative_range;
    outcome(small > large, format!("relative range {small:.6} at |alpha| = 0.2 vs {large:.6} at 0.5"))
}

fn robustness_ordering() -> Outcome {
    let dp = DecayParams::from_degree(0.5).unwrap();
    let retained = |a: f64| {
        let p = EcsParams::real(a, a, PI).unwrap();
        mixed_ecs_eof(&p, &dp).unwrap() / mixed_ecs_eof(&p, &DecayParams::none()).unwrap()
    };
    let (small, large) = (retained(0.3), retained(1.5));
    outcome(small > large, format!("retained fraction {small:.6} at |alpha| = 0.3 vs {large:.6} at 1.5"))
}

fn concurrence_routes() -> Outcome {
    let mut rng = support::rng(2024);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let rho = support::random_rank2_density(&mut rng);
        let a = concurrence(&rho).unwrap().concurrence;
        worst = worst.max((a - support::charpoly_concurrence(&rho)).abs());
    }
    outcome(worst <= 1e-9, format!("max deviation {worst:.2e} over 1000 densities"))
}

fn soft_protocol_comparison() -> Outcome {
    let p = TeleportParams::new(1.0, 1.0, decay_params(LN_2).unwrap()).unwrap();
    let cfg = ProtocolConfig { dim: 32, samples: 10_000, seed: 42, ..ProtocolConfig::default() };
    let est = simulate_protocol(&p, &cfg).unwrap();
    let ps = success_probability(&p).unwrap();
    let f = mean_fidelity(&p).unwrap();
    let checks = [
        ("success rate", est.success_rate, ps),
        ("success weight", est.success_weight, ps),
        ("conditional fidelity", est.fidelity, f),
    ];
    let mut lines = Vec::new();
    let mut agree = true;
    for (name, e, closed) in checks {
        let s = e.sigmas_from(closed);
        agree &= s <= 3.0;
        lines.push(format!("{name} {:.5} +- {:.5} vs {closed:.5} ({s:.2} sigma)", e.mean, e.std_error));
    }
    let tag = if agree { "agreement" } else { "DISCREPANCY (non-blocking)" };
    outcome(true, format!("{tag}: {}", lines.join("; ")))
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(u32, &str, bool, Check); 11] = [
        (1, "maximal entanglement", true, maximal_entanglement),
        (2, "pure-limit consistency", true, pure_limit),
        (3, "Fock oracle EoF equivalence", true, oracle_equivalence),
        (4, "Kraus sum vs closed-form channel", true, kraus_channel),
        (5, "protocol anchors", true, protocol_anchors),
        (6, "perfect conditional teleportation", true, perfect_teleportation),
        (7, "fidelity revival above 2/3", true, fidelity_revival),
        (8, "phase-sensitivity ordering", true, phase_sensitivity_ordering),
        (9, "robustness ordering", true, robustness_ordering),
        (10, "concurrence route equivalence", true, concurrence_routes),
        (11, "oracle vs closed-form protocol means (soft)", false, soft_protocol_comparison),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut blocking_failures = Vec::new();
    for (n, name, blocking, check) in criteria {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}: {status}  {name}: {} [{:.2?}]", out.detail, start.elapsed());
        if !out.pass && blocking {
            blocking_failures.push(n);
        }
    }
    if !blocking_failures.is_empty() {
        println!("failed criteria: {blocking_failures:?}");
        std::process::exit(1);
    }
}
