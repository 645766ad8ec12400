//! Discrete entropy measures with a one-bounded entropy functional.
//!
//! Lin entropy `H*(p)` is the Jensen-Shannon divergence between the joint
//! law of `X` with a deterministic copy of itself and the joint law of `X`
//! with an independent copy. Since Shannon entropy is the KL divergence
//! between the same pair, `H*` behaves like Shannon entropy while staying
//! below one, and unlike `H/log₂N` it still tells a coin from a die.
//!
//! | Function | Quantity |
//! |----------|----------|
//! | [`shannon_entropy`] | `−Σ p log₂ p` |
//! | [`normalized_shannon_entropy`] | `H(p) / log₂ N` |
//! | [`kl_divergence`] | `Σ p log₂(p/q)` |
//! | [`js_divergence`] | `H((p+q)/2) − (H(p)+H(q))/2` |
//! | [`lin_entropy`] | `Σ p I*(p)`, `I*(α) = log₂ √(4α^α/(α+1)^(α+1))` |
//! | [`logical_entropy`] | `1 − Σ p²` |
//!
//! Numeric code is generic over [`Real`] (`f32`, `f64`); the aliases below
//! fix the scalar for the common case.
//!
//! ```
//! use lin_entropy::{lin_entropy, normalized_shannon_entropy, uniform_distribution};
//!
//! let coin = uniform_distribution::<f64>(2).unwrap();
//! let die = uniform_distribution::<f64>(6).unwrap();
//! assert_eq!(normalized_shannon_entropy(&coin).unwrap(), 1.0);
//! assert_eq!(normalized_shannon_entropy(&die).unwrap(), 1.0);
//! assert!(lin_entropy(&die) > lin_entropy(&coin));
//! ```

pub mod cli;
pub mod distributions;
pub mod divergences;
mod error;
pub mod lin;
mod real;
pub mod sum;
pub mod verification;

pub use distributions::{
    empirical_distribution, make_distribution, random_distribution, sample_simplex,
    uniform_distribution, Distribution, JointDistribution, MassFunction, WeightVector,
};
pub use divergences::{
    js_divergence, js_divergence_general, kl_divergence, normalized_shannon_entropy, self_joint,
    self_product, shannon_entropy,
};
pub use error::{Error, Result};
pub use lin::{
    corollary_residual, lin_entropy, lin_entropy_implicit, lin_entropy_uniform, lin_surprisal,
    lin_surprisal_d1, lin_surprisal_d2, logical_entropy, weighted_surprisal_d2, SurprisalValue,
};
pub use real::{xlog2x, Real};
pub use sum::{compensated_sum, CompensatedSum};

pub type DistributionF64 = Distribution<f64>;
pub type DistributionF32 = Distribution<f32>;
pub type JointDistributionF64 = JointDistribution<f64>;
pub type JointDistributionF32 = JointDistribution<f32>;
pub type WeightVectorF64 = WeightVector<f64>;
pub type WeightVectorF32 = WeightVector<f32>;
pub type SurprisalF64 = SurprisalValue<f64>;
pub type SurprisalF32 = SurprisalValue<f32>;
