//! Lin entropy: the Jensen-Shannon divergence between a variable's
//! self-joint and self-product distributions.
//!
//! For a marginal `p` this reduces to the expectation of a per-symbol
//! surprisal,
//!
//! ```text
//! H*(p) = Σ p(x) I*(p(x)),   I*(α) = log₂ √(4 α^α / (α+1)^(α+1))
//! ```
//!
//! which lies in `[0, 1)`, vanishes only on point masses, and is strictly
//! increasing in `N` along the uniform distributions `U_N`. The surprisal is
//! evaluated as `1 + ½[α log₂ α − (α+1) log₂(α+1)]`, which is exact at both
//! endpoints and avoids the nested powers of the radical.

use serde::Serialize;

use crate::distributions::{Distribution, MassFunction, WeightVector};
use crate::divergences::{js_divergence_general, js_of, self_joint, self_product};
use crate::error::{Error, Result};
use crate::real::xlog2x;
use crate::sum::compensated_sum;
use crate::Real;

/// `(α+1) log₂(α+1)`, via `ln_1p` where `α` is small.
#[inline]
fn shifted_xlog2x<T: Real>(alpha: T) -> T {
    let s = alpha + T::one();
    if alpha < T::half() {
        s * alpha.ln_1p() / T::ln_2()
    } else {
        s * s.log2()
    }
}

/// Surprisal without the range check. Callers guarantee `α ∈ [0, 1]`.
#[inline]
pub(crate) fn surprisal<T: Real>(alpha: T) -> T {
    let v = T::one() + T::half() * (xlog2x(alpha) - shifted_xlog2x(alpha));
    v.max(T::zero()).min(T::one())
}

fn check_unit<T: Real>(prob: T) -> Result<()> {
    if prob >= T::zero() && prob <= T::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange(prob.as_f64()))
    }
}

fn check_positive_unit<T: Real>(prob: T) -> Result<()> {
    check_unit(prob)?;
    if prob == T::zero() {
        return Err(Error::ZeroProbability);
    }
    Ok(())
}

/// Lin surprisal `I*(α)` in bits: `I*(0) = 1`, `I*(1) = 0`, decreasing and
/// strictly convex in between.
pub fn lin_surprisal<T: Real>(prob: T) -> Result<T> {
    check_unit(prob)?;
    Ok(surprisal(prob))
}

/// `dI*/dα = (ln α − ln(α+1)) / ln 4`, always negative.
pub fn lin_surprisal_d1<T: Real>(prob: T) -> Result<T> {
    check_positive_unit(prob)?;
    Ok((prob.ln() - prob.ln_1p()) / (T::two() * T::ln_2()))
}

/// `d²I*/dα² = 1 / ((α² + α) ln 4)`, always positive.
pub fn lin_surprisal_d2<T: Real>(prob: T) -> Result<T> {
    check_positive_unit(prob)?;
    Ok(T::one() / ((prob * prob + prob) * T::two() * T::ln_2()))
}

/// Second derivative of the summand `α · I*(α)`:
///
/// ```text
/// (2(α+1) ln(α/(α+1)) + 1) / (2(α+1) ln 2)
/// ```
///
/// Negative on `(0, 1)`, so `H*` is strictly concave.
pub fn weighted_surprisal_d2<T: Real>(prob: T) -> Result<T> {
    if !(prob > T::zero() && prob < T::one()) {
        return Err(Error::OutOfRange(prob.as_f64()));
    }
    let s = prob + T::one();
    let log_ratio = prob.ln() - prob.ln_1p();
    Ok((T::two() * s * log_ratio + T::one()) / (T::two() * s * T::ln_2()))
}

/// A surprisal together with the probability it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurprisalValue<T> {
    pub value: T,
    pub probability: T,
}

impl<T: Real> SurprisalValue<T> {
    pub fn at(probability: T) -> Result<Self> {
        Ok(Self {
            value: lin_surprisal(probability)?,
            probability,
        })
    }

    /// The symbol is certain, so observing it carries no information.
    pub fn is_certain(&self) -> bool {
        self.value == T::zero()
    }
}

/// `H*(p) = Σ p(x) I*(p(x))`. Zero-mass symbols contribute nothing.
pub fn lin_entropy<T: Real>(p: &Distribution<T>) -> T {
    let h = compensated_sum(
        p.masses()
            .iter()
            .filter(|&&m| m > T::zero())
            .map(|&m| m * surprisal(m)),
    );
    h.max(T::zero())
}

/// `H*(p) = D*(δ‖π)` evaluated literally over the `N × N` product alphabet.
///
/// Quadratic in the alphabet size. Serves as the independent route for the
/// explicit form in [`lin_entropy`].
pub fn lin_entropy_implicit<T: Real>(p: &Distribution<T>) -> T {
    let delta = self_joint(p);
    let pi = self_product(p);
    js_of(delta.masses(), pi.masses())
}

/// Closed form `H*(U_n) = I*(1/n)`.
pub fn lin_entropy_uniform<T: Real>(n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    Ok(surprisal(T::one() / T::from_count(n as u64)))
}

/// Logical entropy `h(p) = Σ_{x≠x′} p(x) p(x′) = 1 − Σ p(x)²`: the probability
/// that two independent draws differ.
pub fn logical_entropy<T: Real>(p: &Distribution<T>) -> T {
    let collision = compensated_sum(p.masses().iter().map(|&m| m * m));
    (T::one() - collision).max(T::zero())
}

/// `H*(p) − D*(p‖p²) − h(p)/2`, where `p²` is the unnormalized elementwise
/// square. Zero up to rounding for every distribution.
pub fn corollary_residual<T: Real>(p: &Distribution<T>) -> T {
    let weights = WeightVector::from_distribution(p);
    let squared = WeightVector::squared(p);
    let diagonal = js_divergence_general(&weights, &squared).expect("shared alphabet");
    lin_entropy(p) - diagonal - logical_entropy(p) * T::half()
}
