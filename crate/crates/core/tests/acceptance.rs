//! Acceptance suite: one test per release criterion, each printing a
//! single pass/fail line. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines for passing criteria).

use std::time::Instant;

use pressurelab_core::canned;
use pressurelab_core::empirical::{weighted_empirical, PeriodVariant};
use pressurelab_core::empirical::{invariant_markov_marginal, periodic_orbit_measure};
use pressurelab_core::ldp::{dual_rate_bound, nu_mass, run_ldp_experiment};
use pressurelab_core::markovdv::{
    dv_entropy, dv_variational_check, ergodic_convergence_experiment, feynman_kac_exact,
    feynman_kac_mc, twisted_spectrum, MarkovGenerator,
};
use pressurelab_core::oracle::{equilibrium_marginal, pressure_oracle};
use pressurelab_core::pressure::{certify_good_sequence, pressure_estimate};
use pressurelab_core::rate::{check_shift_invariance_of_q, i_functional, j_restricted, q_functional};
use pressurelab_core::separated::maximal_separated_set;
use pressurelab_core::shiftspace::{LocallyConstantPotential, SubshiftSystem};
use pressurelab_core::{Measure, Potential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

const EPSILON: f64 = 0.6;
/// Floating-point slack for comparisons between quantities that are equal
/// in exact arithmetic (the full-shift cases sit at exact zero).
const FP_SLACK: f64 = 1e-12;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: f64,
    started: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, name: &'static str, budget: f64) -> Self {
        Criterion {
            id,
            name,
            budget,
            started: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: String) {
        if !ok {
            self.failures.push(msg);
        }
    }

    fn finish(mut self) {
        let elapsed = self.started.elapsed().as_secs_f64();
        self.check(
            elapsed < self.budget,
            format!("runtime {elapsed:.2}s exceeds {}s", self.budget),
        );
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "acceptance {:>2}  {:<52} {status} ({elapsed:.2}s)",
            self.id, self.name
        );
        assert!(
            self.failures.is_empty(),
            "criterion {} failed:\n  {}",
            self.id,
            self.failures.join("\n  ")
        );
    }
}

fn golden_mean_cases() -> (SubshiftSystem, Vec<(&'static str, Potential)>) {
    let gm = canned::golden_mean();
    let cases = vec![
        ("zero", LocallyConstantPotential::zero(&gm)),
        ("pair", canned::golden_mean_depth2()),
    ];
    (gm, cases)
}

fn full_shift_cases() -> (SubshiftSystem, Vec<(&'static str, Potential)>) {
    let full = SubshiftSystem::full_shift(2);
    let cases = vec![
        ("zero", LocallyConstantPotential::zero(&full)),
        (
            "logp",
            canned::log_weight_potential(&full, &[1.0 / 3.0, 2.0 / 3.0]),
        ),
    ];
    (full, cases)
}

#[test]
fn criterion_1_pressure_definition_vs_oracle() {
    let mut c = Criterion::new(1, "pressure estimate converges to the oracle", 10.0);
    let (gm, cases) = golden_mean_cases();
    for (name, f) in &cases {
        let oracle = pressure_oracle(&gm, f).unwrap();
        let mut errors = Vec::new();
        for n in [4usize, 8, 16] {
            let est = pressure_estimate(&gm, f, n, EPSILON).unwrap();
            errors.push((est.value() - oracle).abs());
        }
        c.check(
            errors[2] <= 0.05,
            format!("{name}: error {:.4} at n=16 exceeds 0.05", errors[2]),
        );
        c.check(
            errors[0] > errors[1] && errors[1] > errors[2],
            format!("{name}: errors {errors:?} not decreasing"),
        );
    }
    c.finish();
}

#[test]
fn criterion_2_good_sequence_certificate() {
    let mut c = Criterion::new(2, "partition sums clear the exponential lower bound", 10.0);
    let (gm, gm_cases) = golden_mean_cases();
    let (full, full_cases) = full_shift_cases();
    for (sys, sys_name, cases) in [
        (&full, "full", &full_cases),
        (&gm, "golden-mean", &gm_cases),
    ] {
        for (name, f) in cases.iter() {
            let flags = certify_good_sequence(sys, f, EPSILON, 0.1, 16).unwrap();
            for (n, ok) in flags {
                c.check(ok, format!("{sys_name}/{name}: bound fails at n={n}"));
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_3_weighted_empirical_convergence() {
    let mut c = Criterion::new(3, "weighted empirical measures reach the Gibbs marginal", 30.0);
    let full = SubshiftSystem::full_shift(2);
    let f: Potential = canned::log_weight_potential(&full, &[1.0 / 3.0, 2.0 / 3.0]);
    let oracle = equilibrium_marginal(&full, &f, 2).unwrap();
    let mut l1 = Vec::new();
    let mut defects = Vec::new();
    for n in [4usize, 8, 16] {
        let set = maximal_separated_set(&full, n, EPSILON).unwrap();
        let mu = weighted_empirical(&f, &set, 2).unwrap();
        l1.push(mu.l1_distance(&oracle).unwrap());
        defects.push(mu.invariance_defect().unwrap());
    }
    c.check(
        l1[2] <= 0.05,
        format!("L1 distance {:.4} at n=16 exceeds 0.05", l1[2]),
    );
    c.check(
        l1[1] <= l1[0] + FP_SLACK && l1[2] <= l1[1] + FP_SLACK,
        format!("distances {l1:?} not decreasing"),
    );
    c.check(
        defects[2] <= defects[0] / 2.0 + FP_SLACK,
        format!(
            "defect {:.3e} at n=16 not half of {:.3e} at n=4",
            defects[2], defects[0]
        ),
    );
    c.finish();
}

#[test]
fn criterion_4_periodic_orbit_convergence() {
    let mut c = Criterion::new(4, "periodic-orbit measures reach the Gibbs marginal", 30.0);
    let full = SubshiftSystem::full_shift(2);
    let gm = canned::golden_mean();
    let cases: Vec<(&SubshiftSystem, &'static str, Potential)> = vec![
        (&full, "full/zero", LocallyConstantPotential::zero(&full)),
        (
            &full,
            "full/logp",
            canned::log_weight_potential(&full, &[1.0 / 3.0, 2.0 / 3.0]),
        ),
        (&gm, "gm/zero", LocallyConstantPotential::zero(&gm)),
        (&gm, "gm/letter", canned::golden_mean_depth1()),
    ];
    for (sys, name, f) in &cases {
        let oracle = equilibrium_marginal(*sys, f, 2).unwrap();
        let mu = periodic_orbit_measure(*sys, f, 16, 2, PeriodVariant::Exact).unwrap();
        let d = mu.l1_distance(&oracle).unwrap();
        c.check(d <= 0.05, format!("{name}: L1 {d:.4} exceeds 0.05"));
    }
    c.finish();
}

#[test]
fn criterion_5_rate_functional_suite() {
    let mut c = Criterion::new(5, "pressure-difference duality identities", 60.0);
    let (gm, _) = golden_mean_cases();
    let full = SubshiftSystem::full_shift(2);
    let f_gm: Potential = canned::golden_mean_depth2();
    let f_full: Potential = canned::log_weight_potential(&full, &[1.0 / 3.0, 2.0 / 3.0]);

    // Q(0) = 0 exactly.
    for (sys, f) in [(&gm, &f_gm), (&full, &f_full)] {
        let q = q_functional(sys, f, &LocallyConstantPotential::zero(sys)).unwrap();
        c.check(q == 0.0, format!("Q(0) = {q:e}, expected exact zero"));
    }

    // Shift invariance of Q on 20 random test potentials.
    let mut rng = ChaCha12Rng::seed_from_u64(17);
    for trial in 0..20 {
        let (sys, f) = if trial % 2 == 0 {
            (&gm, &f_gm)
        } else {
            (&full, &f_full)
        };
        let depth = 1 + trial % 2;
        let omega = LocallyConstantPotential::from_fn(sys, depth, |_| rng.gen_range(-1.0..1.0));
        let r = check_shift_invariance_of_q(sys, f, &omega).unwrap();
        c.check(r <= 1e-10, format!("trial {trial}: residual {r:e}"));
    }

    // The Gibbs marginal lies in the zero set of the restricted conjugate.
    for (sys, f) in [(&gm, &f_gm), (&full, &f_full)] {
        let mu = equilibrium_marginal(sys, f, 2).unwrap();
        let j = j_restricted(sys, f, &mu, 2, 1e-8, 5_000).unwrap();
        c.check(
            j.value() <= 1e-6,
            format!("J at the Gibbs marginal: {:e}", j.value()),
        );
    }

    // Restricted conjugate agrees with the entropy gap on 10 invariant
    // Markov marginals.
    let mut rng = ChaCha12Rng::seed_from_u64(23);
    for trial in 0..10 {
        let (sys, f): (&SubshiftSystem, &Potential) = if trial % 2 == 0 {
            (&gm, &f_gm)
        } else {
            (&full, &f_full)
        };
        let a: f64 = rng.gen_range(0.15..0.85);
        let b: f64 = if trial % 2 == 0 {
            1.0
        } else {
            rng.gen_range(0.15..0.85)
        };
        let rows = vec![vec![a, 1.0 - a], vec![b, 1.0 - b]];
        let mu: Measure = invariant_markov_marginal(sys, &rows, 2).unwrap();
        let j = j_restricted(sys, f, &mu, 2, 1e-9, 20_000).unwrap();
        let i = i_functional(sys, f, &mu).unwrap();
        c.check(
            (j.value() - i).abs() <= 1e-3,
            format!("trial {trial}: |J − I| = {:e}", (j.value() - i).abs()),
        );
    }

    // Bernoulli closed form on the full shift.
    let p = 1.0 / 3.0;
    let mut weights = std::collections::BTreeMap::new();
    weights.insert(vec![0u8], p);
    weights.insert(vec![1u8], 1.0 - p);
    let mu = Measure::new(1, weights).unwrap();
    let zero = LocallyConstantPotential::zero(&full);
    let j = j_restricted(&full, &zero, &mu, 1, 1e-9, 5_000).unwrap();
    let entropy = -(p * p.ln() + (1.0 - p) * (1.0 - p).ln());
    let expect = 2.0f64.ln() - entropy;
    c.check(
        (j.value() - expect).abs() <= 1e-4,
        format!("Bernoulli rate {} vs {expect}", j.value()),
    );
    c.finish();
}

#[test]
fn criterion_6_large_deviation_upper_bound() {
    let mut c = Criterion::new(6, "deviation masses decay above the dual rate", 60.0);
    let full = SubshiftSystem::full_shift(2);
    let f = LocallyConstantPotential::zero(&full);
    let g: Potential = canned::zero_indicator(&full);

    let exp = run_ldp_experiment(&full, &f, &g, 0.25, &[8, 12, 16, 20], EPSILON).unwrap();
    c.check(
        exp.pass(),
        format!(
            "fitted rate {:.4} below dual bound {:.4} − 0.1",
            exp.fitted_rate(),
            exp.dual_bound()
        ),
    );
    let dual = dual_rate_bound(&full, &f, &g, 0.25, 0.5).unwrap();
    c.check(
        (dual - exp.dual_bound()).abs() <= 1e-12,
        "dual bound mismatch".into(),
    );

    // Exact binomial tail at n = 8.
    let set = maximal_separated_set(&full, 8, EPSILON).unwrap();
    let mass = nu_mass(&f, &set, &g, 0.25, 0.5).unwrap();
    let mut tail = 0.0f64;
    for j in 0..=8u32 {
        let frac = j as f64 / 8.0;
        if (frac - 0.5).abs() >= 0.25 {
            let mut binom = 1.0f64;
            for i in 0..j {
                binom = binom * (8 - i) as f64 / (i + 1) as f64;
            }
            tail += binom / 256.0;
        }
    }
    c.check(
        (mass - tail).abs() <= 1e-12,
        format!("nu_mass {mass} vs binomial tail {tail}"),
    );
    c.finish();
}

fn random_generator(rng: &mut ChaCha12Rng) -> (MarkovGenerator<f64>, Vec<f64>) {
    let n = rng.gen_range(2..=8usize);
    let mut rows = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        let mut total = 0.0;
        for j in 0..n {
            if i != j {
                let r = rng.gen_range(0.05..1.0);
                rows[i][j] = r;
                total += r;
            }
        }
        rows[i][i] = -total;
    }
    let v = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (MarkovGenerator::new(&rows).unwrap(), v)
}

#[test]
fn criterion_7_twisted_spectral_suite() {
    let mut c = Criterion::new(7, "twisted eigendata and occupation-time entropy", 30.0);
    let (l2, v2) = canned::two_state_markov::<f64>();
    let (l4, v4) = canned::four_state_markov::<f64>();

    let s2 = twisted_spectrum(&l2, &v2).unwrap();
    let s4 = twisted_spectrum(&l4, &v4).unwrap();
    c.check(
        s2.residual() <= 1e-10 && s4.residual() <= 1e-10,
        format!("residuals {:e}, {:e}", s2.residual(), s4.residual()),
    );
    let golden = (-1.0 + 5.0f64.sqrt()) / 2.0;
    c.check(
        (s2.lambda() - golden).abs() <= 1e-9,
        format!("lambda {} vs (−1+√5)/2", s2.lambda()),
    );

    // Variational identity on 50 random instances.
    let mut rng = ChaCha12Rng::seed_from_u64(123);
    for trial in 0..50 {
        let (gen, v) = random_generator(&mut rng);
        let resid = dv_variational_check(&gen, &v).unwrap();
        c.check(
            resid <= 1e-6,
            format!("trial {trial}: identity residual {resid:e}"),
        );
    }

    // Reversible closed form.
    let sym = MarkovGenerator::new(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
    for p in [0.1f64, 0.3, 0.7] {
        let e = dv_entropy(&sym, &[p, 1.0 - p], 1e-11, 200_000).unwrap();
        let closed = (p.sqrt() - (1.0 - p).sqrt()).powi(2);
        c.check(
            (e.value() - closed).abs() <= 1e-8,
            format!("p={p}: entropy {} vs {closed}", e.value()),
        );
    }
    c.finish();
}

#[test]
fn criterion_8_semigroup_and_ergodic_suite() {
    let mut c = Criterion::new(8, "Feynman–Kac semigroup and occupation convergence", 120.0);
    let (l2, v2) = canned::two_state_markov::<f64>();
    let (l4, v4) = canned::four_state_markov::<f64>();
    let ones2 = vec![1.0; 2];
    let ones4 = vec![1.0; 4];

    // Monte-Carlo against the matrix exponential, 10⁵ trials.
    let t = 2.0;
    let exact = feynman_kac_exact(&l2, &v2, t, &ones2, 0);
    let (mean, se) = feynman_kac_mc(&l2, &v2, t, &ones2, 0, 100_000, 42);
    c.check(
        (mean - exact).abs() <= 3.0 * se,
        format!("MC {mean} vs exact {exact}, 3se = {:.2e}", 3.0 * se),
    );

    // Spectral growth rate at t = 20, every start state.
    let s2 = twisted_spectrum(&l2, &v2).unwrap();
    let s4 = twisted_spectrum(&l4, &v4).unwrap();
    for (gen, v, ones, s, name) in [
        (&l2, &v2, &ones2, &s2, "2-state"),
        (&l4, &v4, &ones4, &s4, "4-state"),
    ] {
        for x in 0..gen.size() {
            let val = feynman_kac_exact(gen, v, 20.0, ones, x);
            let gap = (val.ln() / 20.0 - s.lambda()).abs();
            c.check(gap <= 0.05, format!("{name} state {x}: growth gap {gap:.4}"));
        }
    }

    // Occupation measures of the conjugated chain against μ_V.
    for (gen, v, name) in [(&l2, &v2, "2-state"), (&l4, &v4, "4-state")] {
        let rows =
            ergodic_convergence_experiment(gen, v, &[5.0, 20.0, 100.0], 1000, 42, 0).unwrap();
        let dists: Vec<f64> = rows.iter().map(|r| r.l1_to_mu).collect();
        c.check(
            dists[1] <= dists[0] && dists[2] <= dists[1],
            format!("{name}: distances {dists:?} not decreasing"),
        );
        c.check(
            dists[2] <= 0.05,
            format!("{name}: L1 {:.4} at t=100 exceeds 0.05", dists[2]),
        );
    }
    c.finish();
}
