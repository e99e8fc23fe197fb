//! Topological pressure from separated sets: log-domain partition sums,
//! finite-horizon estimates, and the exponential lower-bound certificate
//! for the sequence of maximal sets.

use crate::error::{Error, Result};
use crate::num::{flt, log_sum_exp, Real};
use crate::oracle::pressure_oracle;
use crate::separated::SeparatedSet;
use crate::shiftspace::{LocallyConstantPotential, SubshiftSystem};

/// A finite-horizon pressure estimate; `value = log_partition_sum / n`.
#[derive(Debug, Clone)]
pub struct PressureEstimate<T> {
    n: usize,
    epsilon: T,
    value: T,
    log_partition_sum: T,
}

impl<T: Real> PressureEstimate<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// Pressure estimate in nats per time step.
    pub fn value(&self) -> T {
        self.value
    }

    pub fn log_partition_sum(&self) -> T {
        self.log_partition_sum
    }
}

/// Birkhoff sums of `f` over the points of a separated set, in set order.
pub(crate) fn birkhoff_sums<T: Real>(
    f: &LocallyConstantPotential<T>,
    set: &SeparatedSet<T>,
) -> Vec<T> {
    set.points()
        .iter()
        .map(|x| f.birkhoff_sum(x, set.n()))
        .collect()
}

/// `log Σ_{x∈E} e^{S_n f(x)}`, accumulated stably with a max-shift.
pub fn log_partition_sum<T: Real>(
    f: &LocallyConstantPotential<T>,
    set: &SeparatedSet<T>,
) -> Result<T> {
    if set.is_empty() {
        return Err(Error::EmptySeparatedSet);
    }
    Ok(log_sum_exp(&birkhoff_sums(f, set)))
}

/// Pressure estimate at horizon `n`: the log partition sum over the
/// canonical maximal (n, ε)-separated set, divided by `n`.
pub fn pressure_estimate<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    n: usize,
    epsilon: T,
) -> Result<PressureEstimate<T>> {
    let set = crate::separated::maximal_separated_set(system, n, epsilon)?;
    let lps = log_partition_sum(f, &set)?;
    Ok(PressureEstimate {
        n,
        epsilon,
        value: lps / flt(n as f64),
        log_partition_sum: lps,
    })
}

/// For each `n ≤ n_max`, flag whether the partition sum over the maximal
/// set clears the exponential lower bound `e^{n (P(f) − γ)}`, with `P(f)`
/// taken from the transfer-operator oracle.
pub fn certify_good_sequence<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    epsilon: T,
    gamma: T,
    n_max: usize,
) -> Result<Vec<(usize, bool)>> {
    assert!(gamma > T::zero(), "gamma must be positive");
    let p_star = pressure_oracle(system, f)?;
    let mut flags = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let set = crate::separated::maximal_separated_set(system, n, epsilon)?;
        let lps = log_partition_sum(f, &set)?;
        let bound = flt::<T>(n as f64) * (p_star - gamma);
        flags.push((n, lps >= bound));
    }
    Ok(flags)
}
