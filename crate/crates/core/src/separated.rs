//! (n, ε)-separated sets: the combinatorial substrate of the pressure
//! definition, with a quadratic certificate.
//!
//! Separation compares the Bowen distance against ε inclusively
//! (`d_n ≥ ε`); on the dyadic value set of this metric that coincides with
//! the strict convention for every ε that is not an exact power of two,
//! and keeps maximal sets valid at the canonical endpoint ε = 1.

use crate::error::{Error, Result};
use crate::num::{flt, Real};
use crate::shiftspace::{SubshiftSystem, SymbolicPoint};

/// A certified list of pairwise (n, ε)-separated points.
#[derive(Debug, Clone)]
pub struct SeparatedSet<T> {
    n: usize,
    epsilon: T,
    points: Vec<SymbolicPoint>,
    maximal: bool,
}

impl<T: Real> SeparatedSet<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn points(&self) -> &[SymbolicPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether the set was built as (and certified) maximal: no canonical
    /// extension of an admissible n-word can be added.
    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    /// Quadratic certificate: every distinct pair is at Bowen distance ≥ ε.
    pub fn verify(&self) -> bool {
        for (i, x) in self.points.iter().enumerate() {
            for y in &self.points[i + 1..] {
                if x.bowen_distance::<T>(y, self.n) < self.epsilon {
                    return false;
                }
            }
        }
        true
    }
}

fn check_epsilon<T: Real>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero() && epsilon <= T::one()) {
        return Err(Error::EpsilonOutOfRange {
            epsilon: epsilon.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// The canonical maximal (n, ε)-separated set for ε ∈ (1/2, 1]: one point
/// per admissible n-word, via canonical extensions.
///
/// In this ε range separation is equivalent to "the first n symbols
/// differ", so distinct n-words are exactly the separated pairs and the
/// set is maximal. Finer scales are rejected; use
/// [`greedy_separated_set`] for those.
pub fn maximal_separated_set<T: Real>(
    system: &SubshiftSystem,
    n: usize,
    epsilon: T,
) -> Result<SeparatedSet<T>> {
    assert!(n >= 1, "horizon must be at least 1");
    check_epsilon(epsilon)?;
    if epsilon <= flt(0.5) {
        return Err(Error::FineScaleEpsilon {
            epsilon: epsilon.to_f64().unwrap_or(f64::NAN),
        });
    }
    let points = system
        .admissible_words(n)
        .into_iter()
        .map(|w| system.canonical_extension(&w))
        .collect();
    Ok(SeparatedSet {
        n,
        epsilon,
        points,
        maximal: true,
    })
}

/// Greedy filter for arbitrary scales: scan `candidates` in order, keeping
/// a point iff it is (n, ε)-separated from everything kept so far.
///
/// Candidates must be admissible points of `system`.
pub fn greedy_separated_set<T: Real>(
    system: &SubshiftSystem,
    candidates: &[SymbolicPoint],
    n: usize,
    epsilon: T,
) -> Result<SeparatedSet<T>> {
    assert!(n >= 1, "horizon must be at least 1");
    check_epsilon(epsilon)?;
    for c in candidates {
        assert!(
            system.point(c.preperiod(), c.period()).is_ok(),
            "candidate {c} is not admissible"
        );
    }
    let mut kept: Vec<SymbolicPoint> = Vec::new();
    for c in candidates {
        if kept
            .iter()
            .all(|k| k.bowen_distance::<T>(c, n) >= epsilon)
        {
            kept.push(c.clone());
        }
    }
    Ok(SeparatedSet {
        n,
        epsilon,
        points: kept,
        maximal: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canned;
    use crate::shiftspace::format_word;
    use proptest::prelude::*;

    #[test]
    fn maximal_full_shift_counts() {
        let full = SubshiftSystem::full_shift(2);
        let e = maximal_separated_set::<f64>(&full, 2, 0.6).unwrap();
        assert_eq!(e.len(), 4);
        assert!(e.is_maximal());
        assert!(e.verify());

        // ε = 1.0 stays valid: all pairwise distances are exactly 1.
        let e1 = maximal_separated_set::<f64>(&full, 1, 1.0).unwrap();
        assert_eq!(e1.len(), 2);
        assert!(e1.verify());
    }

    #[test]
    fn maximal_golden_mean_count() {
        let gm = canned::golden_mean();
        let e = maximal_separated_set::<f64>(&gm, 3, 0.6).unwrap();
        assert_eq!(e.len(), 5);
        assert!(e.verify());
    }

    #[test]
    fn rejects_fine_and_invalid_scales() {
        let full = SubshiftSystem::full_shift(2);
        assert!(matches!(
            maximal_separated_set::<f64>(&full, 2, 0.5),
            Err(Error::FineScaleEpsilon { .. })
        ));
        assert!(matches!(
            maximal_separated_set::<f64>(&full, 2, 1.5),
            Err(Error::EpsilonOutOfRange { .. })
        ));
        assert!(matches!(
            maximal_separated_set::<f64>(&full, 2, 0.0),
            Err(Error::EpsilonOutOfRange { .. })
        ));
    }

    #[test]
    fn greedy_keeps_coarse_candidates() {
        let full = SubshiftSystem::full_shift(2);
        let candidates: Vec<_> = full
            .admissible_words(2)
            .into_iter()
            .map(|w| full.canonical_extension(&w))
            .collect();
        let e = greedy_separated_set::<f64>(&full, &candidates, 2, 0.3).unwrap();
        assert_eq!(e.len(), 4); // pairwise d_2 = 1 > 0.3
        assert!(e.verify());
    }

    #[test]
    fn greedy_drops_duplicates() {
        let full = SubshiftSystem::full_shift(2);
        let x = full.point(&[], &[0, 1]).unwrap();
        let dup = vec![x.clone(), x.clone(), x];
        let e = greedy_separated_set::<f64>(&full, &dup, 3, 0.6).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e.verify());
    }

    #[test]
    fn greedy_singleton() {
        let gm = canned::golden_mean();
        let x = gm.point(&[], &[0]).unwrap();
        let e = greedy_separated_set::<f64>(&gm, &[x], 4, 0.9).unwrap();
        assert_eq!(e.len(), 1);
        assert!(e.verify());
    }

    #[test]
    fn verify_rejects_equal_points() {
        let full = SubshiftSystem::full_shift(2);
        let x = full.point(&[], &[0]).unwrap();
        let alias = full.point(&[0], &[0, 0]).unwrap();
        let bad = SeparatedSet {
            n: 3,
            epsilon: 0.6f64,
            points: vec![x, alias],
            maximal: false,
        };
        assert!(!bad.verify());
    }

    #[test]
    fn cardinality_matches_word_count_and_grows() {
        let gm = canned::golden_mean();
        let mut prev = 0;
        for n in 1..=8 {
            let e = maximal_separated_set::<f64>(&gm, n, 0.75).unwrap();
            assert_eq!(e.len(), gm.admissible_words(n).len());
            assert!(e.len() >= prev);
            prev = e.len();
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Constructor outputs always pass the certificate, across random
        /// primitive systems, horizons, and coarse scales.
        #[test]
        fn constructors_certified(seed in 0u8..40, n in 1usize..6, eps in 0.51f64..1.0) {
            let sys = random_system(seed);
            let e = maximal_separated_set::<f64>(&sys, n, eps).unwrap();
            prop_assert!(e.verify());
            let candidates: Vec<_> = sys
                .admissible_words(n.min(5))
                .into_iter()
                .map(|w| sys.canonical_extension(&w))
                .collect();
            let g = greedy_separated_set::<f64>(&sys, &candidates, n, eps * 0.5).unwrap();
            prop_assert!(g.verify());
        }
    }

    /// Small pool of primitive systems indexed by a seed byte.
    fn random_system(seed: u8) -> SubshiftSystem {
        let pool = [
            SubshiftSystem::full_shift(2),
            canned::golden_mean(),
            canned::three_letter(),
            SubshiftSystem::full_shift(3),
            SubshiftSystem::new(2, &[vec![1, 1], vec![1, 1]]).unwrap(),
            SubshiftSystem::new(3, &[vec![1, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap(),
        ];
        pool[seed as usize % pool.len()].clone()
    }

    #[test]
    fn lexicographic_point_order() {
        let gm = canned::golden_mean();
        let e = maximal_separated_set::<f64>(&gm, 3, 0.6).unwrap();
        let words: Vec<String> = gm
            .admissible_words(3)
            .iter()
            .map(|w| format_word(w))
            .collect();
        // Point i extends word i.
        for (p, w) in e.points().iter().zip(&words) {
            let head: String = format_word(
                &(0..3).map(|i| p.symbol(i)).collect::<Vec<_>>(),
            );
            assert_eq!(&head, w);
        }
    }
}
