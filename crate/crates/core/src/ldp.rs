//! Large-deviation experiments: the laws of orbit averages under the
//! Birkhoff-exponential weights assign exponentially small mass to
//! deviation events, at a rate bounded below by the one-dimensional
//! Legendre dual of the pressure-difference functional.

use crate::error::Result;
use crate::num::{flt, log_sum_exp, tree_map_sum, Real};
use crate::oracle::{equilibrium_marginal, pressure_oracle};
use crate::pressure::birkhoff_sums;
use crate::separated::{maximal_separated_set, SeparatedSet};
use crate::shiftspace::{LocallyConstantPotential, SubshiftSystem};

/// Experiments pass when the fitted decay rate clears the dual bound
/// minus this margin.
pub const RATE_MARGIN: f64 = 0.1;

/// Bracket for the one-dimensional dual search; statistics are bounded,
/// so interior deviation values have finite maximizers well inside it.
const THETA_BRACKET: f64 = 50.0;

/// Result of one deviation experiment for a single statistic.
#[derive(Debug, Clone)]
pub struct LdpExperiment<T> {
    statistic: LocallyConstantPotential<T>,
    threshold: T,
    center: T,
    masses: Vec<(usize, T)>,
    fitted_rate: T,
    dual_bound: T,
}

impl<T: Real> LdpExperiment<T> {
    pub fn statistic(&self) -> &LocallyConstantPotential<T> {
        &self.statistic
    }

    pub fn threshold(&self) -> T {
        self.threshold
    }

    /// Oracle mean of the statistic under the equilibrium state.
    pub fn center(&self) -> T {
        self.center
    }

    /// Deviation masses per horizon.
    pub fn masses(&self) -> &[(usize, T)] {
        &self.masses
    }

    /// Minus the least-squares slope of log-mass against the horizon
    /// (`+∞` when every mass vanishes).
    pub fn fitted_rate(&self) -> T {
        self.fitted_rate
    }

    /// `inf` of the dual rate over the deviation set (`+∞` when the
    /// deviation values are unreachable for the statistic).
    pub fn dual_bound(&self) -> T {
        self.dual_bound
    }

    /// Upper-bound consistency: the observed decay is at least the dual
    /// bound, within [`RATE_MARGIN`].
    pub fn pass(&self) -> bool {
        self.fitted_rate >= self.dual_bound - flt(RATE_MARGIN)
    }
}

/// Mass that the weighted empirical law places on the deviation event
/// `|∫g dδ_n(x) − center| ≥ c`, by exact enumeration over the set.
pub fn nu_mass<T: Real>(
    f: &LocallyConstantPotential<T>,
    set: &SeparatedSet<T>,
    g: &LocallyConstantPotential<T>,
    c: T,
    center: T,
) -> Result<T> {
    assert!(c > T::zero(), "deviation threshold must be positive");
    if set.is_empty() {
        return Err(crate::error::Error::EmptySeparatedSet);
    }
    let sums = birkhoff_sums(f, set);
    let lps = log_sum_exp(&sums);
    let n = set.n();
    let hits: Vec<T> = set
        .points()
        .iter()
        .zip(&sums)
        .filter(|(x, _)| (g.orbit_average(x, n) - center).abs() >= c)
        .map(|(_, s)| (*s - lps).exp())
        .collect();
    Ok(tree_map_sum(&hits, |x| *x))
}

/// The one-dimensional Legendre dual `r(s) = sup_θ (θ·s − Q_f(θ·g))` by
/// golden-section search on θ ∈ [−50, 50].
///
/// Returns `+∞` when the search pins θ at the bracket edge with the
/// objective still climbing, which marks `s` as unreachable for `g`.
pub fn cramer_rate<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    g: &LocallyConstantPotential<T>,
    s: T,
) -> Result<T> {
    let p_f = pressure_oracle(system, f)?;
    let objective = |theta: T| -> Result<T> {
        let tilted = f.add(&g.scale(theta), system);
        Ok(theta * s - (pressure_oracle(system, &tilted)? - p_f))
    };
    let bracket = flt::<T>(THETA_BRACKET);
    let (mut lo, mut hi) = (-bracket, bracket);
    let ratio = flt::<T>((5.0f64.sqrt() - 1.0) / 2.0);
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let mut fa = objective(a)?;
    let mut fb = objective(b)?;
    let tol = crate::num::scaled_tol::<T>(1e-10);
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = objective(b)?;
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = objective(a)?;
        }
    }
    let theta = (lo + hi) * flt(0.5);
    let value = objective(theta)?;
    // Boundary diagnosis: slope s − ∫g dμ_{f+θg} bounded away from zero at
    // the bracket edge means the supremum runs off to infinity.
    if theta.abs() >= bracket - flt(1e-6) {
        let tilted = f.add(&g.scale(theta), system);
        let mean = equilibrium_marginal(system, &tilted, g.depth())?.integrate(g)?;
        let slope = s - mean;
        if slope.abs() > flt(1e-6) {
            return Ok(T::infinity());
        }
    }
    Ok(value)
}

/// `inf` of the dual rate over the two-sided deviation set
/// `{|s − center| ≥ c}`: the rate is convex with minimum at the center,
/// so the infimum sits at one of the endpoints `center ± c`.
pub fn dual_rate_bound<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    g: &LocallyConstantPotential<T>,
    c: T,
    center: T,
) -> Result<T> {
    assert!(c > T::zero(), "deviation threshold must be positive");
    let below = cramer_rate(system, f, g, center - c)?;
    let above = cramer_rate(system, f, g, center + c)?;
    Ok(below.min(above))
}

/// Run the deviation experiment over a list of horizons: masses from
/// exact enumeration, decay rate from least squares on the log-masses,
/// dual bound from the Legendre dual at the deviation endpoints.
pub fn run_ldp_experiment<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    g: &LocallyConstantPotential<T>,
    c: T,
    n_list: &[usize],
    epsilon: T,
) -> Result<LdpExperiment<T>> {
    assert!(!n_list.is_empty(), "need at least one horizon");
    assert!(
        n_list.windows(2).all(|w| w[0] < w[1]),
        "horizons must be increasing"
    );
    let center = equilibrium_marginal(system, f, g.depth())?.integrate(g)?;
    let mut masses = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let set = maximal_separated_set(system, n, epsilon)?;
        masses.push((n, nu_mass(f, &set, g, c, center)?));
    }
    let fitted_rate = fit_decay_rate(&masses);
    let dual_bound = dual_rate_bound(system, f, g, c, center)?;
    Ok(LdpExperiment {
        statistic: g.clone(),
        threshold: c,
        center,
        masses,
        fitted_rate,
        dual_bound,
    })
}

/// Minus the least-squares slope of `log mass` against `n`, over the
/// horizons with positive mass. Degenerate cases: a single point gives
/// `−log(mass)/n`, no points give `+∞`.
fn fit_decay_rate<T: Real>(masses: &[(usize, T)]) -> T {
    let pts: Vec<(T, T)> = masses
        .iter()
        .filter(|(_, m)| *m > T::zero())
        .map(|(n, m)| (flt::<T>(*n as f64), m.ln()))
        .collect();
    match pts.len() {
        0 => T::infinity(),
        1 => -pts[0].1 / pts[0].0,
        len => {
            let count = flt::<T>(len as f64);
            let mean_x = pts.iter().fold(T::zero(), |a, p| a + p.0) / count;
            let mean_y = pts.iter().fold(T::zero(), |a, p| a + p.1) / count;
            let cov = pts
                .iter()
                .fold(T::zero(), |a, p| a + (p.0 - mean_x) * (p.1 - mean_y));
            let var = pts
                .iter()
                .fold(T::zero(), |a, p| a + (p.0 - mean_x) * (p.0 - mean_x));
            -(cov / var)
        }
    }
}
