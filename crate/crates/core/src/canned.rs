//! Frozen reference systems, potentials, and generators used by the
//! regression experiments and the CLI.

use crate::markovdv::MarkovGenerator;
use crate::num::{flt, Real};
use crate::shiftspace::{LocallyConstantPotential, SubshiftSystem};

/// The golden-mean shift: no two consecutive 1s.
pub fn golden_mean() -> SubshiftSystem {
    SubshiftSystem::new(2, &[vec![1, 1], vec![1, 0]]).expect("primitive")
}

/// A three-letter test system with an asymmetric constraint.
pub fn three_letter() -> SubshiftSystem {
    SubshiftSystem::new(3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).expect("primitive")
}

/// Depth-1 potential `f(x) = log p_{x₀}`; its equilibrium state is the
/// product measure with the given letter weights.
pub fn log_weight_potential<T: Real>(
    system: &SubshiftSystem,
    weights: &[f64],
) -> LocallyConstantPotential<T> {
    assert_eq!(weights.len(), system.alphabet_size());
    LocallyConstantPotential::from_fn(system, 1, |w| flt(weights[w[0] as usize].ln()))
}

/// Canned depth-1 potential on the golden-mean shift.
pub fn golden_mean_depth1<T: Real>() -> LocallyConstantPotential<T> {
    let gm = golden_mean();
    LocallyConstantPotential::from_fn(&gm, 1, |w| flt(if w[0] == 0 { 0.3 } else { -0.2 }))
}

/// Canned depth-2 potential on the golden-mean shift.
pub fn golden_mean_depth2<T: Real>() -> LocallyConstantPotential<T> {
    let gm = golden_mean();
    LocallyConstantPotential::from_fn(&gm, 2, |w| {
        flt(match (w[0], w[1]) {
            (0, 0) => 0.2,
            (0, 1) => -0.3,
            (1, 0) => 0.5,
            _ => unreachable!("inadmissible golden-mean pair"),
        })
    })
}

/// Depth-1 indicator of the first symbol being 0 (the deviation statistic
/// of the canned experiment).
pub fn zero_indicator<T: Real>(system: &SubshiftSystem) -> LocallyConstantPotential<T> {
    LocallyConstantPotential::from_fn(system, 1, |w| {
        if w[0] == 0 {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// Two-state generator with potential (1, 0); the principal eigenvalue is
/// (−1 + √5)/2.
pub fn two_state_markov<T: Real>() -> (MarkovGenerator<T>, Vec<T>) {
    let rows = vec![
        vec![flt(-1.0), flt(1.0)],
        vec![flt(1.0), flt(-1.0)],
    ];
    (
        MarkovGenerator::new(&rows).expect("valid generator"),
        vec![T::one(), T::zero()],
    )
}

/// Four-state irreducible generator with a mixed-sign potential.
pub fn four_state_markov<T: Real>() -> (MarkovGenerator<T>, Vec<T>) {
    let rows: Vec<Vec<T>> = [
        [-1.2, 0.7, 0.3, 0.2],
        [0.4, -1.0, 0.5, 0.1],
        [0.2, 0.3, -0.9, 0.4],
        [0.6, 0.1, 0.3, -1.0],
    ]
    .iter()
    .map(|r| r.iter().map(|&x| flt(x)).collect())
    .collect();
    let v = [0.5, -0.25, 0.0, 0.25].iter().map(|&x| flt(x)).collect();
    (MarkovGenerator::new(&rows).expect("valid generator"), v)
}
