//! Scalar abstraction and deterministic reduction helpers.
//!
//! All numeric kernels are generic over the working scalar; `f64` is the
//! default precision (see the crate-root aliases), `f32` is supported with
//! tolerances floored at a multiple of the type epsilon.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the library computes with: `f32` or `f64`.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + std::iter::Sum
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Convert an `f64` constant into the working scalar.
#[inline]
pub(crate) fn flt<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant representable in scalar type")
}

/// A tolerance stated for `f64`, floored at `64·ε` of the working scalar so
/// the same contract stays meaningful at `f32` precision.
#[inline]
pub(crate) fn scaled_tol<T: Real>(tol: f64) -> T {
    flt::<T>(tol).max(T::epsilon() * flt(64.0))
}

/// Fixed-shape pairwise tree reduction.
///
/// The reduction tree depends only on the slice length, so the result is
/// bit-reproducible and the two halves may be evaluated concurrently
/// without changing it.
pub(crate) fn tree_fold<T: Copy, F: Fn(T, T) -> T + Copy>(xs: &[T], identity: T, op: F) -> T {
    match xs.len() {
        0 => identity,
        1 => xs[0],
        n => {
            let (lo, hi) = xs.split_at(n / 2);
            op(tree_fold(lo, identity, op), tree_fold(hi, identity, op))
        }
    }
}

/// Tree-shaped `Σ f(x)` over a slice; same determinism guarantee as
/// [`tree_fold`].
pub(crate) fn tree_map_sum<T: Real, X, F: Fn(&X) -> T + Copy>(xs: &[X], f: F) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => f(&xs[0]),
        n => {
            let (lo, hi) = xs.split_at(n / 2);
            tree_map_sum(lo, f) + tree_map_sum(hi, f)
        }
    }
}

/// `log Σ exp(xs)` with max-shift, accumulated as a pairwise tree.
///
/// Returns `-∞` for an empty slice.
pub(crate) fn log_sum_exp<T: Real>(xs: &[T]) -> T {
    if xs.is_empty() {
        return T::neg_infinity();
    }
    let shift = tree_fold(xs, T::neg_infinity(), |a, b| a.max(b));
    if shift == T::neg_infinity() {
        return shift;
    }
    let total = tree_map_sum(xs, |x| (*x - shift).exp());
    shift + total.ln()
}
