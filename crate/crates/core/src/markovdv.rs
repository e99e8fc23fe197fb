//! Finite-state continuous-time analog: conservative generators, twisted
//! principal eigendata, the occupation-time entropy and its variational
//! identity, Feynman–Kac semigroups (exact and Monte-Carlo), the
//! eigenfunction conjugation that restores a genuine Markov generator, and
//! occupation-measure convergence experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::linalg::{expm, perron, DenseMatrix};
use crate::num::{flt, scaled_tol, tree_map_sum, Real};

const MAX_POWER_ITERATIONS: usize = 100_000;

/// A conservative rate matrix: nonnegative off-diagonal entries, rows
/// summing to zero, irreducible rate graph.
#[derive(Debug, Clone)]
pub struct MarkovGenerator<T> {
    q: DenseMatrix<T>,
}

impl<T: Real> MarkovGenerator<T> {
    /// Validating constructor. Row-sum defects within 1e-12 (relative to
    /// the row magnitude) are absorbed into the diagonal so downstream
    /// arithmetic sees exact conservativity.
    pub fn new(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGenerator("rate table is not square".into()));
        }
        let mut q = DenseMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            let mut magnitude = T::zero();
            let mut sum = T::zero();
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidGenerator(format!(
                        "non-finite rate at ({i},{j})"
                    )));
                }
                if i != j && v < T::zero() {
                    return Err(Error::InvalidGenerator(format!(
                        "negative off-diagonal rate at ({i},{j})"
                    )));
                }
                magnitude = magnitude + v.abs();
                sum = sum + v;
                q.set(i, j, v);
            }
            if sum.abs() > scaled_tol::<T>(1e-12) * (T::one() + magnitude) {
                return Err(Error::InvalidGenerator(format!(
                    "row {i} sums to {sum}, expected 0"
                )));
            }
            let off: T = (0..n)
                .filter(|&j| j != i)
                .fold(T::zero(), |a, j| a + q.get(i, j));
            q.set(i, i, -off);
        }
        let gen = MarkovGenerator { q };
        if !gen.is_irreducible() {
            return Err(Error::InvalidGenerator(
                "rate graph is not strongly connected".into(),
            ));
        }
        Ok(gen)
    }

    fn is_irreducible(&self) -> bool {
        let n = self.size();
        let reach = |transpose: bool| {
            let mut seen = vec![false; n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    let edge = if transpose {
                        self.q.get(j, i)
                    } else {
                        self.q.get(i, j)
                    };
                    if i != j && edge > T::zero() && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(false) && reach(true)
    }

    pub fn size(&self) -> usize {
        self.q.size()
    }

    pub fn rate(&self, i: usize, j: usize) -> T {
        self.q.get(i, j)
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.size())
            .map(|i| (0..self.size()).map(|j| self.q.get(i, j)).collect())
            .collect()
    }

    fn twisted_matrix(&self, v: &[T]) -> DenseMatrix<T> {
        assert_eq!(v.len(), self.size(), "potential length mismatch");
        let mut b = self.q.clone();
        for (i, &vi) in v.iter().enumerate() {
            b.set(i, i, b.get(i, i) + vi);
        }
        b
    }
}

/// Principal eigendata of the twisted operator `Q + diag(V)`: eigenvalue,
/// positive right/left eigenvectors, and the maximizing measure
/// `μ_V ∝ l_V ⊙ r_V`.
#[derive(Debug, Clone)]
pub struct TwistedSpectrum<T> {
    lambda: T,
    right: Vec<T>,
    left: Vec<T>,
    mu: Vec<T>,
    residual: T,
}

impl<T: Real> TwistedSpectrum<T> {
    /// Principal eigenvalue of `Q + diag(V)`.
    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn right(&self) -> &[T] {
        &self.right
    }

    pub fn left(&self) -> &[T] {
        &self.left
    }

    /// The maximizing probability vector `μ_V`.
    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    /// Worst absolute eigen-residual of either side.
    pub fn residual(&self) -> T {
        self.residual
    }
}

/// Principal eigendata of `Q + diag(V)` by a diagonal shift to a
/// primitive nonnegative matrix and two-sided power iteration.
pub fn twisted_spectrum<T: Real>(
    gen: &MarkovGenerator<T>,
    v: &[T],
) -> Result<TwistedSpectrum<T>> {
    let b = gen.twisted_matrix(v);
    let n = b.size();
    let mut magnitude = T::zero();
    for i in 0..n {
        for j in 0..n {
            magnitude = magnitude.max(b.get(i, j).abs());
        }
    }
    let shift = T::one() + magnitude;
    let m = b.shift_diagonal(shift);
    let data = perron(&m, scaled_tol(1e-12), MAX_POWER_ITERATIONS)?;
    let lambda = data.lambda - shift;
    let mu_raw: Vec<T> = data
        .left
        .iter()
        .zip(&data.right)
        .map(|(l, r)| *l * *r)
        .collect();
    let total = tree_map_sum(&mu_raw, |x| *x);
    let mu = mu_raw.into_iter().map(|x| x / total).collect();
    // Residuals measured on the unshifted operator.
    let br = b.mul_vec(&data.right);
    let bl = b.vec_mul(&data.left);
    let worst = |v: &[T], bv: &[T]| {
        bv.iter()
            .zip(v)
            .fold(T::zero(), |a, (y, x)| a.max((*y - lambda * *x).abs()))
    };
    let residual = worst(&data.right, &br).max(worst(&data.left, &bl));
    Ok(TwistedSpectrum {
        lambda,
        right: data.right,
        left: data.left,
        mu,
        residual,
    })
}

/// `(T_V(t) g)(x) = (e^{t(Q + diag V)} g)(x)`: the expectation of
/// `g(X_t) e^{∫₀ᵗ V}` over the base process, computed through the matrix
/// exponential.
pub fn feynman_kac_exact<T: Real>(
    gen: &MarkovGenerator<T>,
    v: &[T],
    t: T,
    g: &[T],
    x: usize,
) -> T {
    assert!(t >= T::zero(), "time must be nonnegative");
    assert_eq!(g.len(), gen.size());
    assert!(x < gen.size());
    let e = expm(&gen.twisted_matrix(v), t);
    (0..gen.size()).fold(T::zero(), |a, j| a + e.get(x, j) * g[j])
}

/// A piecewise-constant trajectory on `[0, Σ durations]`.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    states: Vec<usize>,
    durations: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn durations(&self) -> &[T] {
        &self.durations
    }

    pub fn total_time(&self) -> T {
        self.durations.iter().fold(T::zero(), |a, d| a + *d)
    }
}

/// Simulate the jump chain of `gen` from `x` up to time `t`; the last
/// holding interval is truncated so the trajectory covers `[0, t]`
/// exactly.
pub fn simulate_trajectory<T: Real>(
    gen: &MarkovGenerator<T>,
    t: T,
    x: usize,
    rng: &mut impl Rng,
) -> Trajectory<T> {
    assert!(x < gen.size());
    let mut states = Vec::new();
    let mut durations = Vec::new();
    let mut state = x;
    let mut remaining = t;
    loop {
        let rate = -gen.rate(state, state);
        if rate <= T::zero() {
            // Absorbing under the rate graph; cannot happen for an
            // irreducible generator, but keep the trajectory well formed.
            states.push(state);
            durations.push(remaining);
            break;
        }
        let u: T = flt(rng.gen::<f64>());
        let hold = -(T::one() - u).ln() / rate;
        if hold >= remaining {
            states.push(state);
            durations.push(remaining);
            break;
        }
        states.push(state);
        durations.push(hold);
        remaining = remaining - hold;
        // Jump proportionally to the off-diagonal rates.
        let draw: T = flt::<T>(rng.gen::<f64>()) * rate;
        let mut acc = T::zero();
        let mut target = state;
        for j in 0..gen.size() {
            if j == state {
                continue;
            }
            acc = acc + gen.rate(state, j);
            if draw < acc {
                target = j;
                break;
            }
        }
        if target == state {
            // Rounding pushed the draw past the last bin; take the last
            // positive-rate neighbor.
            target = (0..gen.size())
                .rev()
                .find(|&j| j != state && gen.rate(state, j) > T::zero())
                .expect("irreducible rows have a positive off-diagonal rate");
        }
        state = target;
    }
    Trajectory { states, durations }
}

/// Per-trial RNG: one counter-based stream per trajectory index, so
/// results do not depend on scheduling.
fn trial_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Monte-Carlo Feynman–Kac: simulates base-process trajectories and
/// accumulates `g(X_t) e^{∫V}` exactly along the piecewise-constant path.
/// Returns the sample mean and the standard error of the mean.
pub fn feynman_kac_mc<T: Real>(
    gen: &MarkovGenerator<T>,
    v: &[T],
    t: T,
    g: &[T],
    x: usize,
    trials: usize,
    seed: u64,
) -> (T, T) {
    assert!(trials >= 1);
    assert!(t >= T::zero());
    assert_eq!(g.len(), gen.size());
    assert_eq!(v.len(), gen.size());
    let samples: Vec<T> = (0..trials)
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let traj = simulate_trajectory(gen, t, x, &mut rng);
            let weight = traj
                .states
                .iter()
                .zip(&traj.durations)
                .fold(T::zero(), |a, (&s, &d)| a + v[s] * d);
            g[*traj.states.last().unwrap()] * weight.exp()
        })
        .collect();
    let count = flt::<T>(trials as f64);
    let mean = tree_map_sum(&samples, |s| *s) / count;
    if trials == 1 {
        return (mean, T::zero());
    }
    let ss = tree_map_sum(&samples, |s| (*s - mean) * (*s - mean));
    let std_error = (ss / (count - T::one()) / count).sqrt();
    (mean, std_error)
}

/// Conjugate the twisted operator by its principal eigenfunction:
/// `Q̃ = diag(r)⁻¹ (Q + diag(V) − λI) diag(r)` is again a conservative
/// generator, and its stationary law is `μ_V`.
pub fn doob_generator<T: Real>(
    gen: &MarkovGenerator<T>,
    v: &[T],
) -> Result<MarkovGenerator<T>> {
    let spectrum = twisted_spectrum(gen, v)?;
    let r = spectrum.right();
    let n = gen.size();
    let mut rows = vec![vec![T::zero(); n]; n];
    let check = flt::<T>(1e-9);
    for i in 0..n {
        let mut off = T::zero();
        for j in 0..n {
            if i != j {
                let rate = gen.rate(i, j) * r[j] / r[i];
                rows[i][j] = rate;
                off = off + rate;
            }
        }
        let diagonal = gen.rate(i, i) + v[i] - spectrum.lambda();
        let defect = (diagonal + off).abs();
        if defect > check {
            return Err(Error::InternalConsistency {
                what: "doob_generator",
                detail: format!(
                    "row {i} sum defect {:e} exceeds 1e-9",
                    defect.to_f64().unwrap_or(f64::NAN)
                ),
            });
        }
        rows[i][i] = -off;
    }
    let doob = MarkovGenerator::new(&rows)?;
    // The stationary law must match the maximizing measure.
    let mut worst = T::zero();
    for j in 0..n {
        let flow = (0..n).fold(T::zero(), |a, i| a + spectrum.mu()[i] * doob.rate(i, j));
        worst = worst.max(flow.abs());
    }
    if worst > check {
        return Err(Error::InternalConsistency {
            what: "doob_generator",
            detail: format!(
                "stationarity residual {:e} exceeds 1e-9",
                worst.to_f64().unwrap_or(f64::NAN)
            ),
        });
    }
    Ok(doob)
}

/// Outcome of the occupation-time entropy minimization.
#[derive(Debug, Clone)]
pub struct DvEntropy<T> {
    value: T,
    gradient_norm: T,
    iterations: usize,
    converged: bool,
}

impl<T: Real> DvEntropy<T> {
    /// Certified lower bound of the entropy (exact at convergence).
    pub fn value(&self) -> T {
        self.value
    }

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

/// The occupation-time entropy `I(μ) = −inf_{u>0} ∫ (Qu)/u dμ`,
/// parametrized as `u = e^w` with the gauge `w₀ = 0` and minimized by
/// gradient descent with a backtracking line search.
///
/// Measures with zero entries are perturbed to
/// `(1−1e-9)·μ + 1e-9·uniform` to keep the objective finite.
pub fn dv_entropy<T: Real>(
    gen: &MarkovGenerator<T>,
    mu: &[T],
    tol: T,
    max_iter: usize,
) -> Result<DvEntropy<T>> {
    let n = gen.size();
    if mu.len() != n {
        return Err(Error::InvalidMeasure(format!(
            "measure has {} entries for {n} states",
            mu.len()
        )));
    }
    if mu.iter().any(|&m| m < T::zero() || !m.is_finite()) {
        return Err(Error::InvalidMeasure("negative or non-finite mass".into()));
    }
    let total = tree_map_sum(mu, |x| *x);
    if (total - T::one()).abs() > scaled_tol(1e-10) {
        return Err(Error::InvalidMeasure(format!("mass sums to {total}")));
    }
    let mu: Vec<T> = if mu.iter().any(|&m| m == T::zero()) {
        let eps = flt::<T>(1e-9);
        let unif = eps / flt(n as f64);
        mu.iter().map(|&m| (T::one() - eps) * m + unif).collect()
    } else {
        mu.to_vec()
    };

    let objective = |w: &[T]| -> T {
        let mut phi = T::zero();
        for i in 0..n {
            for j in 0..n {
                let q = gen.rate(i, j);
                if q != T::zero() {
                    phi = phi + mu[i] * q * (w[j] - w[i]).exp();
                }
            }
        }
        phi
    };
    let gradient = |w: &[T]| -> Vec<T> {
        let mut grad = vec![T::zero(); n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let flow = mu[i] * gen.rate(i, j) * (w[j] - w[i]).exp();
                grad[j] = grad[j] + flow;
                grad[i] = grad[i] - flow;
            }
        }
        grad[0] = T::zero(); // gauge
        grad
    };

    let mut w = vec![T::zero(); n];
    let mut phi = objective(&w); // = 0 for a conservative generator
    let mut step = T::one();
    let mut grad_norm = T::infinity();
    let mut iterations = 0usize;
    let mut stalls = 0usize;
    let armijo = flt::<T>(0.25);
    let min_step = scaled_tol::<T>(1e-18);
    for it in 1..=max_iter {
        iterations = it;
        let grad = gradient(&w);
        grad_norm = grad.iter().fold(T::zero(), |a, g| a + g.abs());
        if grad_norm <= tol {
            break;
        }
        let grad_sq = grad.iter().fold(T::zero(), |a, g| a + *g * *g);
        let before = phi;
        loop {
            let trial: Vec<T> = w.iter().zip(&grad).map(|(x, g)| *x - step * *g).collect();
            let trial_phi = objective(&trial);
            if trial_phi <= phi - armijo * step * grad_sq {
                w = trial;
                phi = trial_phi;
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
        // Descent stalled at rounding noise: the value is converged even
        // if the gradient target is below the attainable floor.
        if before - phi <= T::epsilon() * (T::one() + phi.abs()) {
            stalls += 1;
            if stalls >= 5 {
                break;
            }
        } else {
            stalls = 0;
        }
    }
    Ok(DvEntropy {
        value: -phi,
        gradient_norm: grad_norm,
        iterations,
        converged: grad_norm <= tol,
    })
}

/// Residual of the variational identity `λ_V = ∫V dμ_V − I(μ_V)`;
/// ≤ 1e-6 by contract.
pub fn dv_variational_check<T: Real>(gen: &MarkovGenerator<T>, v: &[T]) -> Result<T> {
    let spectrum = twisted_spectrum(gen, v)?;
    let entropy = dv_entropy(gen, spectrum.mu(), scaled_tol(1e-10), 200_000)?;
    let pairing = v
        .iter()
        .zip(spectrum.mu())
        .fold(T::zero(), |a, (vi, mi)| a + *vi * *mi);
    Ok((spectrum.lambda() - (pairing - entropy.value())).abs())
}

/// Fraction of `[0, t]` spent in each state along a piecewise-constant
/// trajectory covering at least `[0, t]`.
pub fn occupation_measure<T: Real>(traj: &Trajectory<T>, t: T) -> Result<Vec<T>> {
    if t <= T::zero() {
        return Err(Error::ZeroDuration);
    }
    let n = traj.states.iter().copied().max().map_or(0, |m| m + 1);
    let mut occ = vec![T::zero(); n];
    let mut remaining = t;
    for (&s, &d) in traj.states.iter().zip(&traj.durations) {
        let slice = d.min(remaining);
        occ[s] = occ[s] + slice / t;
        remaining = remaining - slice;
        if remaining <= T::zero() {
            break;
        }
    }
    assert!(
        remaining <= scaled_tol(1e-9),
        "trajectory shorter than the occupation window"
    );
    Ok(occ)
}

/// One row of the occupation-convergence table.
#[derive(Debug, Clone)]
pub struct ErgodicRow<T> {
    pub t: T,
    pub l1_to_mu: T,
}

/// Average occupation measures of the conjugated chain against `μ_V`:
/// for each horizon, the mean over `trials` trajectories started at
/// `start`, reported as an L1 distance.
pub fn ergodic_convergence_experiment<T: Real>(
    gen: &MarkovGenerator<T>,
    v: &[T],
    t_list: &[T],
    trials: usize,
    seed: u64,
    start: usize,
) -> Result<Vec<ErgodicRow<T>>> {
    assert!(trials >= 100, "need at least 100 trials");
    let spectrum = twisted_spectrum(gen, v)?;
    let doob = doob_generator(gen, v)?;
    let n = gen.size();
    let mut rows = Vec::with_capacity(t_list.len());
    for (ti, &t) in t_list.iter().enumerate() {
        if t <= T::zero() {
            return Err(Error::ZeroDuration);
        }
        let mut mean = vec![T::zero(); n];
        for trial in 0..trials {
            let stream = ((ti as u64) << 32) | trial as u64;
            let mut rng = trial_rng(seed, stream);
            let traj = simulate_trajectory(&doob, t, start, &mut rng);
            let occ = occupation_measure(&traj, t)?;
            for (m, o) in mean.iter_mut().zip(&occ) {
                *m = *m + *o;
            }
        }
        let count = flt::<T>(trials as f64);
        let l1 = mean
            .iter()
            .zip(spectrum.mu())
            .fold(T::zero(), |a, (m, target)| a + (*m / count - *target).abs());
        rows.push(ErgodicRow { t, l1_to_mu: l1 });
    }
    Ok(rows)
}
