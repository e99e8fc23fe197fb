//! Weighted empirical measures: orbit averages of separated points,
//! Birkhoff-exponential atomic weights, their mixtures, and the
//! periodic-orbit variant — the constructions whose weak limits are the
//! equilibrium states.
//!
//! Measures are handled through their finite-depth cylinder marginals,
//! which generate the weak topology on this space.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::num::{flt, log_sum_exp, tree_map_sum, Real};
use crate::pressure::birkhoff_sums;
use crate::separated::SeparatedSet;
use crate::shiftspace::{LocallyConstantPotential, SubshiftSystem, SymbolicPoint, Word};

/// A probability assignment over admissible depth-`m` words: the
/// finite-dimensional stand-in for a measure on the shift space.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderMeasure<T> {
    depth: usize,
    weights: BTreeMap<Word, T>,
}

impl<T: Real> CylinderMeasure<T> {
    /// Validating constructor: weights must be nonnegative and sum to 1
    /// within 1e-12.
    pub fn new(depth: usize, weights: BTreeMap<Word, T>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidMeasure("depth must be at least 1".into()));
        }
        if weights.keys().any(|w| w.len() != depth) {
            return Err(Error::InvalidMeasure(format!(
                "all words must have length {depth}"
            )));
        }
        if weights.values().any(|&v| !(v >= T::zero()) || !v.is_finite()) {
            return Err(Error::InvalidMeasure("negative or non-finite weight".into()));
        }
        let entries: Vec<T> = weights.values().copied().collect();
        let total = tree_map_sum(&entries, |x| *x);
        if (total - T::one()).abs() > crate::num::scaled_tol(1e-12) {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(CylinderMeasure { depth, weights })
    }

    /// Normalize a nonnegative assignment exactly (pairwise-tree total).
    pub(crate) fn normalized(depth: usize, mut weights: BTreeMap<Word, T>) -> Self {
        let entries: Vec<T> = weights.values().copied().collect();
        let total = tree_map_sum(&entries, |x| *x);
        for v in weights.values_mut() {
            *v = *v / total;
        }
        CylinderMeasure { depth, weights }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn weights(&self) -> &BTreeMap<Word, T> {
        &self.weights
    }

    /// Mass of a single word (zero when absent).
    pub fn weight(&self, w: &[u8]) -> T {
        self.weights.get(w).copied().unwrap_or_else(T::zero)
    }

    /// Sum out trailing coordinates down to `depth`; preserves total mass.
    pub fn marginalize(&self, depth: usize) -> Result<CylinderMeasure<T>> {
        if depth == 0 || depth > self.depth {
            return Err(Error::BadMarginalDepth {
                requested: depth,
                available: self.depth,
            });
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        let mut out: BTreeMap<Word, T> = BTreeMap::new();
        for (w, &v) in &self.weights {
            let e = out.entry(w[..depth].to_vec()).or_insert_with(T::zero);
            *e = *e + v;
        }
        Ok(CylinderMeasure {
            depth,
            weights: out,
        })
    }

    /// `Σ_w |μ(w) − ν(w)|`; both measures must have equal depth.
    pub fn l1_distance(&self, other: &CylinderMeasure<T>) -> Result<T> {
        if self.depth != other.depth {
            return Err(Error::DepthMismatch {
                left: self.depth,
                right: other.depth,
            });
        }
        let mut total = T::zero();
        for (w, &v) in &self.weights {
            total = total + (v - other.weight(w)).abs();
        }
        for (w, &v) in &other.weights {
            if !self.weights.contains_key(w) {
                total = total + v.abs();
            }
        }
        Ok(total)
    }

    /// L1 distance between the leading and trailing (depth−1)-marginals: a
    /// finite-depth surrogate for shift invariance, zero on invariant
    /// measures.
    pub fn invariance_defect(&self) -> Result<T> {
        if self.depth < 2 {
            return Err(Error::BadMarginalDepth {
                requested: self.depth.wrapping_sub(1),
                available: self.depth,
            });
        }
        let leading = self.marginalize(self.depth - 1)?;
        let mut trailing: BTreeMap<Word, T> = BTreeMap::new();
        for (w, &v) in &self.weights {
            let e = trailing.entry(w[1..].to_vec()).or_insert_with(T::zero);
            *e = *e + v;
        }
        leading.l1_distance(&CylinderMeasure {
            depth: self.depth - 1,
            weights: trailing,
        })
    }

    /// The pairing `∫ f dμ`; requires `f.depth() ≤ self.depth()`.
    pub fn integrate(&self, f: &LocallyConstantPotential<T>) -> Result<T> {
        if f.depth() > self.depth {
            return Err(Error::DepthMismatch {
                left: f.depth(),
                right: self.depth,
            });
        }
        let marginal = self.marginalize(f.depth())?;
        let mut total = T::zero();
        for (w, &v) in &marginal.weights {
            total = total + v * f.eval(w);
        }
        Ok(total)
    }
}

/// Atomic probability weights on a separated set, stored in the log domain
/// and aligned positionally with the set's point list.
#[derive(Debug, Clone)]
pub struct WeightedSet<T> {
    set: SeparatedSet<T>,
    log_weights: Vec<T>,
    normalized: bool,
}

impl<T: Real> WeightedSet<T> {
    pub fn set(&self) -> &SeparatedSet<T> {
        &self.set
    }

    /// Log-weights, one per point of the set, in the set's order.
    pub fn log_weights(&self) -> &[T] {
        &self.log_weights
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Linear-domain weights.
    pub fn weights(&self) -> Vec<T> {
        self.log_weights.iter().map(|&l| l.exp()).collect()
    }
}

/// The orbit-averaged measure of a single point: word `w` receives the
/// fraction of windows `x_j .. x_{j+depth-1}`, `j < n`, equal to `w`.
/// Windows near `j = n` read into the point's periodic tail.
pub fn orbit_empirical<T: Real>(
    x: &SymbolicPoint,
    n: usize,
    depth: usize,
) -> CylinderMeasure<T> {
    assert!(n >= 1 && depth >= 1);
    let inv_n = T::one() / flt(n as f64);
    let mut weights: BTreeMap<Word, T> = BTreeMap::new();
    let mut window: Word = (0..depth).map(|i| x.symbol(i)).collect();
    for j in 0..n {
        let e = weights.entry(window.clone()).or_insert_with(T::zero);
        *e = *e + inv_n;
        window.rotate_left(1);
        let tail = window.len() - 1;
        window[tail] = x.symbol(j + depth);
    }
    CylinderMeasure { depth, weights }
}

/// Birkhoff-exponential weights `β(x) ∝ e^{S_n f(x)}` on a separated set,
/// normalized in the log domain.
pub fn beta_weights<T: Real>(
    f: &LocallyConstantPotential<T>,
    set: SeparatedSet<T>,
) -> Result<WeightedSet<T>> {
    if set.is_empty() {
        return Err(Error::EmptySeparatedSet);
    }
    let sums = birkhoff_sums(f, &set);
    let lps = log_sum_exp(&sums);
    let log_weights = sums.into_iter().map(|s| s - lps).collect();
    Ok(WeightedSet {
        set,
        log_weights,
        normalized: true,
    })
}

/// The β-weighted average of orbit measures over a separated set: the
/// finite-horizon approximant of an equilibrium state.
pub fn weighted_empirical<T: Real>(
    f: &LocallyConstantPotential<T>,
    set: &SeparatedSet<T>,
    depth: usize,
) -> Result<CylinderMeasure<T>> {
    if set.is_empty() {
        return Err(Error::EmptySeparatedSet);
    }
    assert!(depth >= 1);
    let n = set.n();
    let sums = birkhoff_sums(f, set);
    let lps = log_sum_exp(&sums);
    let inv_n = T::one() / flt(n as f64);
    let mut weights: BTreeMap<Word, T> = BTreeMap::new();
    let mut window: Word = Vec::with_capacity(depth);
    for (x, s) in set.points().iter().zip(&sums) {
        let beta = (*s - lps).exp();
        window.clear();
        window.extend((0..depth).map(|i| x.symbol(i)));
        for j in 0..n {
            let e = weights.entry(window.clone()).or_insert_with(T::zero);
            *e = *e + beta * inv_n;
            window.rotate_left(1);
            let tail = window.len() - 1;
            window[tail] = x.symbol(j + depth);
        }
    }
    Ok(CylinderMeasure::normalized(depth, weights))
}

/// Which periodic points enter [`periodic_orbit_measure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodVariant {
    /// Points of period dividing `n` only.
    Exact,
    /// Points of period dividing `p`, accumulated over all `p ≤ n`
    /// (the closed-orbits-up-to-length-t normalization).
    Cumulative,
}

/// The periodic-orbit approximant: orbit measures of periodic points,
/// weighted by `e^{S_p f}` and normalized. Every point of a cyclic orbit
/// contributes individually; the rotations share one Birkhoff sum, so this
/// differs from an orbit-class sum only by normalization.
pub fn periodic_orbit_measure<T: Real>(
    system: &SubshiftSystem,
    f: &LocallyConstantPotential<T>,
    n: usize,
    depth: usize,
    variant: PeriodVariant,
) -> Result<CylinderMeasure<T>> {
    assert!(n >= 1 && depth >= 1);
    let periods: Vec<usize> = match variant {
        PeriodVariant::Exact => vec![n],
        PeriodVariant::Cumulative => (1..=n).collect(),
    };
    let mut atoms: Vec<(SymbolicPoint, usize, T)> = Vec::new();
    for p in periods {
        for x in system.periodic_points(p) {
            let s = f.birkhoff_sum(&x, p);
            atoms.push((x, p, s));
        }
    }
    if atoms.is_empty() {
        return Err(Error::NoPeriodicPoints { n });
    }
    let logs: Vec<T> = atoms.iter().map(|(_, _, s)| *s).collect();
    let lse = log_sum_exp(&logs);
    let mut weights: BTreeMap<Word, T> = BTreeMap::new();
    let mut window: Word = Vec::with_capacity(depth);
    for (x, p, s) in &atoms {
        let w = (*s - lse).exp() / flt(*p as f64);
        window.clear();
        window.extend((0..depth).map(|i| x.symbol(i)));
        for j in 0..*p {
            let e = weights.entry(window.clone()).or_insert_with(T::zero);
            *e = *e + w;
            window.rotate_left(1);
            let tail = window.len() - 1;
            window[tail] = x.symbol(j + depth);
        }
    }
    Ok(CylinderMeasure::normalized(depth, weights))
}

/// Depth-`depth` marginal of the shift-invariant Markov measure with the
/// given letter-transition matrix (row-stochastic, positive exactly on the
/// allowed pairs).
pub fn invariant_markov_marginal<T: Real>(
    system: &SubshiftSystem,
    transitions: &[Vec<T>],
    depth: usize,
) -> Result<CylinderMeasure<T>> {
    let k = system.alphabet_size();
    if transitions.len() != k || transitions.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidMeasure(format!(
            "transition matrix is not {k}x{k}"
        )));
    }
    let mut p = crate::linalg::DenseMatrix::zeros(k);
    for (a, row) in transitions.iter().enumerate() {
        let mut sum = T::zero();
        for (b, &v) in row.iter().enumerate() {
            let allowed = system.allows(a as u8, b as u8);
            if (v > T::zero()) != allowed {
                return Err(Error::InvalidMeasure(format!(
                    "transition ({a},{b}) must be positive exactly when the pair is allowed"
                )));
            }
            if v < T::zero() {
                return Err(Error::InvalidMeasure("negative transition".into()));
            }
            sum = sum + v;
            p.set(a, b, v);
        }
        if (sum - T::one()).abs() > crate::num::scaled_tol(1e-10) {
            return Err(Error::InvalidMeasure(format!("row {a} sums to {sum}")));
        }
    }
    let eigen = crate::linalg::perron(&p, crate::num::scaled_tol(1e-14), 100_000)?;
    let total = eigen.left.iter().fold(T::zero(), |a, x| a + *x);
    let pi: Vec<T> = eigen.left.iter().map(|&x| x / total).collect();
    let weights = system
        .admissible_words(depth)
        .into_iter()
        .map(|w| {
            let mut mass = pi[w[0] as usize];
            for pair in w.windows(2) {
                mass = mass * p.get(pair[0] as usize, pair[1] as usize);
            }
            (w, mass)
        })
        .collect();
    Ok(CylinderMeasure::normalized(depth, weights))
}
