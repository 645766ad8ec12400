//! Shannon entropy, Kullback-Leibler and Jensen-Shannon divergences, and the
//! self-joint / self-product constructions. All logarithms are base 2.

use crate::distributions::{Distribution, JointDistribution, MassFunction, WeightVector};
use crate::error::{Error, Result};
use crate::real::xlog2x;
use crate::sum::compensated_sum;
use crate::Real;

fn same_alphabet<T, M: MassFunction<T>>(p: &M, q: &M) -> Result<()> {
    if p.labels() != q.labels() || p.masses().len() != q.masses().len() {
        return Err(Error::LabelMismatch);
    }
    Ok(())
}

pub(crate) fn entropy_of<T: Real>(masses: &[T]) -> T {
    -compensated_sum(masses.iter().map(|&m| xlog2x(m)))
}

/// Jensen-Shannon divergence as the entropy gap of the midpoint mixture.
///
/// Evaluated as `H(m) − (H(p) + H(q))/2`; both the mixture and the average
/// are commutative in floating point, so swapping arguments is bit-exact.
pub(crate) fn js_of<T: Real>(p: &[T], q: &[T]) -> T {
    let mixture: Vec<T> = p.iter().zip(q).map(|(&a, &b)| (a + b) * T::half()).collect();
    let gap = entropy_of(&mixture) - (entropy_of(p) + entropy_of(q)) * T::half();
    // The gap is nonnegative; only cancellation can push it below zero.
    gap.max(T::zero())
}

/// `H(p) = −Σ p(x) log₂ p(x)` in bits, with `0 · log₂ 0 = 0`.
pub fn shannon_entropy<T: Real, M: MassFunction<T>>(p: &M) -> T {
    entropy_of(p.masses())
}

/// `H(p) / log₂ N`, clamped to `[0, 1]` against rounding.
pub fn normalized_shannon_entropy<T: Real>(p: &Distribution<T>) -> Result<T> {
    let n = p.len();
    if n < 2 {
        return Err(Error::SingletonAlphabet);
    }
    let h = shannon_entropy(p) / T::from_count(n as u64).log2();
    Ok(h.max(T::zero()).min(T::one()))
}

/// `D(p‖q) = Σ p(x) log₂(p(x)/q(x))` in bits.
///
/// Coordinates with `p(x) = 0` contribute nothing, even where `q(x) = 0`.
pub fn kl_divergence<T: Real, M: MassFunction<T>>(p: &M, q: &M) -> Result<T> {
    same_alphabet(p, q)?;
    let mut terms = Vec::with_capacity(p.masses().len());
    for (i, (&a, &b)) in p.masses().iter().zip(q.masses()).enumerate() {
        if a == T::zero() {
            continue;
        }
        if b == T::zero() {
            let n = p.labels().len();
            let label = if p.masses().len() == n {
                p.labels()[i].clone()
            } else {
                format!("({}, {})", p.labels()[i / n], p.labels()[i % n])
            };
            return Err(Error::AbsoluteContinuityViolated { label });
        }
        terms.push(a * (a / b).log2());
    }
    // Individual terms may be negative; the total never is.
    Ok(compensated_sum(terms).max(T::zero()))
}

/// `δ(x, x′) = p(x)` if `x = x′`, else 0: `X` paired with a deterministic copy.
pub fn self_joint<T: Real>(p: &Distribution<T>) -> JointDistribution<T> {
    let n = p.len();
    let mut masses = vec![T::zero(); n * n];
    for (i, &m) in p.masses().iter().enumerate() {
        masses[i * n + i] = m;
    }
    JointDistribution::new(p.labels().to_vec(), masses)
        .expect("diagonal of a valid distribution is a valid joint")
}

/// `π(x, x′) = p(x) p(x′)`: `X` paired with an independent copy.
pub fn self_product<T: Real>(p: &Distribution<T>) -> JointDistribution<T> {
    let masses = p
        .masses()
        .iter()
        .flat_map(|&a| p.masses().iter().map(move |&b| a * b))
        .collect();
    JointDistribution::new(p.labels().to_vec(), masses)
        .expect("outer product of a valid distribution is a valid joint")
}

/// `D*(p‖q) = H((p+q)/2) − (H(p) + H(q))/2`, in `[0, 1]` bits.
///
/// No absolute-continuity requirement: the mixture dominates both inputs.
pub fn js_divergence<T: Real, M: MassFunction<T>>(p: &M, q: &M) -> Result<T> {
    same_alphabet(p, q)?;
    Ok(js_of(p.masses(), q.masses()))
}

/// Averaged-KL form `½ Σ a log₂(a/m) + ½ Σ b log₂(b/m)`, `m = (a+b)/2`,
/// over weights that need not be normalized.
///
/// For two distributions this equals [`js_divergence`]. Unnormalized
/// arguments arise in the decomposition `H*(p) = D*(p‖p²) + h(p)/2`.
pub fn js_divergence_general<T: Real>(a: &WeightVector<T>, b: &WeightVector<T>) -> Result<T> {
    if a.labels() != b.labels() {
        return Err(Error::LabelMismatch);
    }
    let term = |x: T, m: T| {
        if x == T::zero() {
            T::zero()
        } else {
            x * (x / m).log2()
        }
    };
    let total = compensated_sum(a.weights().iter().zip(b.weights()).flat_map(|(&x, &y)| {
        let m = (x + y) * T::half();
        [term(x, m), term(y, m)]
    }));
    Ok(total * T::half())
}
