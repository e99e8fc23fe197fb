//! The convex-duality layer: the pressure-difference functional
//! `Q_f(ω) = P(f+ω) − P(f)`, its convex conjugate restricted to
//! finite-depth test potentials (a certified lower bound of the rate
//! functional), and the entropy-gap functional on invariant Markov
//! marginals.

use crate::empirical::CylinderMeasure;
use crate::error::{Error, Result};
use crate::num::{flt, scaled_tol, Real};
use crate::oracle::{equilibrium_marginal, pressure_oracle};
use crate::shiftspace::{LocallyConstantPotential, SubshiftSystem, Word};

/// Outcome of the restricted conjugate maximization.
#[derive(Debug, Clone)]
pub struct RateResult<T> {
    value: T,
    maximizer: LocallyConstantPotential<T>,
    gradient_norm: T,
    iterations: usize,
    converged: bool,
}

impl<T: Real> RateResult<T> {
    /// Certified lower bound of the rate functional at the measure.
    pub fn value(&self) -> T {
        self.value
    }

    /// The test potential attaining the bound.
    pub fn maximizer(&self) -> &LocallyConstantPotential<T> {
        &self.maximizer
    }

    /// L1 norm of the supergradient at exit.
    pub fn gradient_norm(&self) -> T {
        self.gradient_norm
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn converged(&self) -> bool {
        self.converged
    }
}

/// `Q_f(ω) = P(f+ω) − P(f)`, with both potentials lifted to a common depth.
pub fn q_functional<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    omega: &LocallyConstantPotential<T>,
) -> Result<T> {
    Ok(pressure_oracle(system, &f.add(omega, system))? - pressure_oracle(system, f)?)
}

/// `|Q_f(ω) − Q_f(ω∘T)|`: the shift invariance of `Q_f` as a residual,
/// ≤ 1e-10 by contract.
pub fn check_shift_invariance_of_q<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    omega: &LocallyConstantPotential<T>,
) -> Result<T> {
    let direct = q_functional(system, f, omega)?;
    let shifted = q_functional(system, f, &omega.shifted(system))?;
    Ok((direct - shifted).abs())
}

/// `sup over depth-d ω of ∫ω dμ − Q_f(ω)` by supergradient ascent with a
/// backtracking line search. The supergradient at ω is
/// `μ − (Gibbs marginal of f+ω)`, so the ascent terminates when μ is
/// matched as a depth-`depth` Gibbs marginal.
///
/// On non-convergence the best value found is still a valid lower bound
/// and is returned with `converged = false`.
pub fn j_restricted<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    mu: &CylinderMeasure<T>,
    depth: usize,
    tol: T,
    max_iter: usize,
) -> Result<RateResult<T>> {
    assert!(depth >= 1);
    if mu.depth() < depth {
        return Err(Error::DepthMismatch {
            left: mu.depth(),
            right: depth,
        });
    }
    let target = mu.marginalize(depth)?;
    let words = system.admissible_words(depth);
    let mu_vec: Vec<T> = words.iter().map(|w| target.weight(w)).collect();
    let p_f = pressure_oracle(system, f)?;

    let build = |coeffs: &[T]| -> LocallyConstantPotential<T> {
        let table = words
            .iter()
            .cloned()
            .zip(coeffs.iter().copied())
            .collect::<std::collections::BTreeMap<Word, T>>();
        LocallyConstantPotential::new(system, depth, table).expect("table covers words")
    };
    let objective = |coeffs: &[T]| -> Result<T> {
        let omega = build(coeffs);
        let pairing = coeffs
            .iter()
            .zip(&mu_vec)
            .fold(T::zero(), |a, (o, m)| a + *o * *m);
        Ok(pairing - (pressure_oracle(system, &f.add(&omega, system))? - p_f))
    };

    let mut coeffs = vec![T::zero(); words.len()];
    let mut value = objective(&coeffs)?; // exactly 0 at ω = 0
    let mut step = T::one();
    let mut grad_norm = T::infinity();
    let mut iterations = 0usize;
    let mut stalls = 0usize;
    let armijo = flt::<T>(0.25);
    let min_step = scaled_tol::<T>(1e-18);

    for it in 1..=max_iter {
        iterations = it;
        let gibbs = equilibrium_marginal(system, &f.add(&build(&coeffs), system), depth)?;
        let grad: Vec<T> = words
            .iter()
            .zip(&mu_vec)
            .map(|(w, m)| *m - gibbs.weight(w))
            .collect();
        grad_norm = grad.iter().fold(T::zero(), |a, g| a + g.abs());
        if grad_norm <= tol {
            break;
        }
        let grad_sq = grad.iter().fold(T::zero(), |a, g| a + *g * *g);
        let before = value;
        loop {
            let trial: Vec<T> = coeffs
                .iter()
                .zip(&grad)
                .map(|(c, g)| *c + step * *g)
                .collect();
            let trial_value = objective(&trial)?;
            if trial_value >= value + armijo * step * grad_sq {
                coeffs = trial;
                value = trial_value;
                step = step + step;
                break;
            }
            step = step * flt(0.5);
            if step < min_step {
                break;
            }
        }
        if step < min_step {
            break;
        }
        // Give up once improvements sink to rounding noise.
        if value - before <= T::epsilon() * (T::one() + value.abs()) {
            stalls += 1;
            if stalls >= 5 {
                break;
            }
        } else {
            stalls = 0;
        }
    }
    Ok(RateResult {
        value,
        maximizer: build(&coeffs),
        gradient_norm: grad_norm,
        iterations,
        converged: grad_norm <= tol,
    })
}

/// The entropy gap `I(μ) = P(f) − (h(μ) + ∫f dμ)` on depth-`m` marginals
/// of shift-invariant Markov measures, with the entropy in closed form
/// through the induced block chain. Rejects measures whose invariance
/// defect exceeds 1e-10.
pub fn i_functional<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    mu: &CylinderMeasure<T>,
) -> Result<T> {
    if f.depth() > mu.depth() {
        return Err(Error::DepthMismatch {
            left: f.depth(),
            right: mu.depth(),
        });
    }
    let limit = scaled_tol::<T>(1e-10);
    if mu.depth() >= 2 {
        let defect = mu.invariance_defect()?;
        if defect > limit {
            return Err(Error::NotInvariantMarginal {
                defect: defect.to_f64().unwrap_or(f64::NAN),
                limit: limit.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(pressure_oracle(system, f)? - markov_entropy(mu)? - mu.integrate(f)?)
}

/// Entropy of the Markov measure determined by a depth-`m` marginal: the
/// conditional entropy of the last symbol given the leading block.
fn markov_entropy<T: Real>(mu: &CylinderMeasure<T>) -> Result<T> {
    let mut h = T::zero();
    if mu.depth() == 1 {
        for &p in mu.weights().values() {
            if p > T::zero() {
                h = h - p * p.ln();
            }
        }
        return Ok(h);
    }
    let prefix = mu.marginalize(mu.depth() - 1)?;
    for (w, &p) in mu.weights() {
        if p > T::zero() {
            let base = prefix.weight(&w[..w.len() - 1]);
            h = h - p * (p / base).ln();
        }
    }
    Ok(h)
}
