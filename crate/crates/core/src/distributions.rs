//! Probability mass functions over finite labeled alphabets.
//!
//! Every type here is validated at construction and immutable afterwards.
//! Zero-mass symbols are kept: the `0 · log 0 = 0` convention used by the
//! measures needs to see them, and stripping them would change the alphabet.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sum::compensated_sum;
use crate::Real;

/// Anything that is a flat vector of masses indexed by an ordered alphabet.
///
/// Divergences accept any two values of the same implementing type, so the
/// same routine serves marginals and joints.
pub trait MassFunction<T> {
    /// Symbol labels. For joints these are the row (and column) labels.
    fn labels(&self) -> &[String];
    /// Masses in storage order. Joints store rows back to back.
    fn masses(&self) -> &[T];
}

/// Probability mass function over a finite, nonempty alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution<T> {
    labels: Vec<String>,
    masses: Vec<T>,
}

/// Probability mass function over the product alphabet `X × X`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution<T> {
    labels: Vec<String>,
    masses: Vec<T>,
}

/// Nonnegative, not necessarily normalized measure over an alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector<T> {
    labels: Vec<String>,
    weights: Vec<T>,
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn check_masses<T: Real>(label_of: impl Fn(usize) -> String, masses: &[T]) -> Result<()> {
    for (i, &m) in masses.iter().enumerate() {
        if !m.is_finite() {
            return Err(Error::NonFiniteMass {
                label: label_of(i),
                mass: m.as_f64(),
            });
        }
        if m < T::zero() {
            return Err(Error::NegativeMass {
                label: label_of(i),
                mass: m.as_f64(),
            });
        }
    }
    let sum = compensated_sum(masses.iter().copied());
    if (sum - T::one()).abs() > T::normalization_tolerance() {
        return Err(Error::NotNormalized { sum: sum.as_f64() });
    }
    Ok(())
}

pub(crate) fn synthetic_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl<T: Real> Distribution<T> {
    /// Validates and wraps `masses` over `labels`. Masses are never
    /// renormalized; a sum off by more than the tolerance is an error.
    pub fn new(labels: Vec<String>, masses: Vec<T>) -> Result<Self> {
        if labels.len() != masses.len() {
            return Err(Error::LengthMismatch {
                labels: labels.len(),
                values: masses.len(),
            });
        }
        check_labels(&labels)?;
        check_masses(|i| labels[i].clone(), &masses)?;
        Ok(Self { labels, masses })
    }

    /// Like [`Distribution::new`] with labels `"0"`, `"1"`, ….
    pub fn from_masses(masses: Vec<T>) -> Result<Self> {
        Self::new(synthetic_labels(masses.len()), masses)
    }

    /// All mass on symbol `at` of an `n`-symbol alphabet.
    pub fn degenerate(n: usize, at: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        if at >= n {
            return Err(Error::OutOfRange(at as f64));
        }
        let mut masses = vec![T::zero(); n];
        masses[at] = T::one();
        Ok(Self {
            labels: synthetic_labels(n),
            masses,
        })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    /// Always false: the alphabet is nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn mass_of(&self, label: &str) -> Option<T> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.masses[i])
    }

    /// Label carrying the largest mass; the first one on ties.
    pub fn max_symbol(&self) -> &str {
        let mut best = 0;
        for (i, &m) in self.masses.iter().enumerate() {
            if m > self.masses[best] {
                best = i;
            }
        }
        &self.labels[best]
    }

    pub fn max_mass(&self) -> T {
        self.masses
            .iter()
            .copied()
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn is_degenerate(&self) -> bool {
        self.masses.iter().any(|&m| m == T::one())
    }

    /// Reorders the `(label, mass)` pairs; `order[i]` is the source index of
    /// position `i`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::LengthMismatch {
                labels: self.len(),
                values: order.len(),
            });
        }
        let mut used = vec![false; order.len()];
        for &i in order {
            if i >= order.len() || std::mem::replace(&mut used[i], true) {
                return Err(Error::OutOfRange(i as f64));
            }
        }
        Ok(Self {
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            masses: order.iter().map(|&i| self.masses[i]).collect(),
        })
    }

    /// `λ·self + (1−λ)·other` over the shared alphabet.
    pub fn mix(&self, other: &Self, lambda: T) -> Result<Self> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch);
        }
        if !(lambda >= T::zero() && lambda <= T::one()) {
            return Err(Error::OutOfRange(lambda.as_f64()));
        }
        let masses = self
            .masses
            .iter()
            .zip(&other.masses)
            .map(|(&p, &q)| lambda * p + (T::one() - lambda) * q)
            .collect();
        Self::new(self.labels.clone(), masses)
    }

    /// L1 distance to a distribution over the same alphabet.
    pub fn l1_distance(&self, other: &Self) -> Result<T> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch);
        }
        Ok(compensated_sum(
            self.masses
                .iter()
                .zip(&other.masses)
                .map(|(&p, &q)| (p - q).abs()),
        ))
    }

    /// Elementwise conversion to another scalar type, revalidated.
    pub fn cast<U: Real>(&self) -> Result<Distribution<U>> {
        let masses = self
            .masses
            .iter()
            .map(|m| U::from_f64(m.as_f64()).ok_or(Error::OutOfRange(m.as_f64())))
            .collect::<Result<Vec<_>>>()?;
        Distribution::new(self.labels.clone(), masses)
    }
}

impl<T> MassFunction<T> for Distribution<T> {
    fn labels(&self) -> &[String] {
        &self.labels
    }

    fn masses(&self) -> &[T] {
        &self.masses
    }
}

impl<T: Real> JointDistribution<T> {
    /// `masses` is row-major, `labels.len()²` entries.
    pub fn new(labels: Vec<String>, masses: Vec<T>) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        if masses.len() != n * n {
            return Err(Error::NotSquare {
                n,
                len: masses.len(),
            });
        }
        check_masses(
            |k| format!("({}, {})", labels[k / n], labels[k % n]),
            &masses,
        )?;
        Ok(Self { labels, masses })
    }

    /// Alphabet size of one coordinate.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.masses[row * self.size() + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.masses.chunks(self.size())
    }
}

impl<T> MassFunction<T> for JointDistribution<T> {
    fn labels(&self) -> &[String] {
        &self.labels
    }

    fn masses(&self) -> &[T] {
        &self.masses
    }
}

impl<T: Real> WeightVector<T> {
    pub fn new(labels: Vec<String>, weights: Vec<T>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::LengthMismatch {
                labels: labels.len(),
                values: weights.len(),
            });
        }
        check_labels(&labels)?;
        for (l, &w) in labels.iter().zip(&weights) {
            if !w.is_finite() || w < T::zero() {
                return Err(Error::NegativeWeight {
                    label: l.clone(),
                    weight: w.as_f64(),
                });
            }
        }
        if weights.iter().all(|&w| w == T::zero()) {
            return Err(Error::AllZeroWeights);
        }
        Ok(Self { labels, weights })
    }

    /// The distribution itself, viewed as a weight vector.
    pub fn from_distribution(p: &Distribution<T>) -> Self {
        Self {
            labels: p.labels.clone(),
            weights: p.masses.clone(),
        }
    }

    /// `x ↦ p(x)²`. Sums to less than one unless `p` is degenerate.
    pub fn squared(p: &Distribution<T>) -> Self {
        Self {
            labels: p.labels.clone(),
            weights: p.masses.iter().map(|&m| m * m).collect(),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn total(&self) -> T {
        compensated_sum(self.weights.iter().copied())
    }
}

/// Validated distribution from parallel label and mass sequences.
pub fn make_distribution<T: Real, S: Into<String>>(
    labels: impl IntoIterator<Item = S>,
    masses: impl IntoIterator<Item = T>,
) -> Result<Distribution<T>> {
    Distribution::new(
        labels.into_iter().map(Into::into).collect(),
        masses.into_iter().collect(),
    )
}

/// Relative frequencies from categorical counts, labels sorted
/// lexicographically.
pub fn empirical_distribution<T: Real, S: Into<String>>(
    counts: impl IntoIterator<Item = (S, u64)>,
) -> Result<Distribution<T>> {
    let mut pairs: Vec<(String, u64)> = counts.into_iter().map(|(l, c)| (l.into(), c)).collect();
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    for w in pairs.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateLabel(w[0].0.clone()));
        }
    }
    let total: u64 = pairs.iter().map(|(_, c)| c).sum();
    if total == 0 {
        return Err(Error::AllZeroCounts);
    }
    let total = T::from_count(total);
    let (labels, masses) = pairs
        .into_iter()
        .map(|(l, c)| (l, T::from_count(c) / total))
        .unzip();
    Distribution::new(labels, masses)
}

/// `U_n`: mass `1/n` on each of `n` symbols labeled `"0".."n-1"`.
pub fn uniform_distribution<T: Real>(n: usize) -> Result<Distribution<T>> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let m = T::one() / T::from_count(n as u64);
    Distribution::new(synthetic_labels(n), vec![m; n])
}

/// Draws a point uniformly from the `(n−1)`-simplex using `rng`.
pub fn sample_simplex<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Distribution<T>> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if n == 1 {
        return Distribution::from_masses(vec![T::one()]);
    }
    // Normalized unit exponentials are a flat Dirichlet draw.
    let draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total = compensated_sum(draws.iter().copied());
    let masses = draws.iter().map(|&x| T::lit(x / total)).collect();
    Distribution::from_masses(masses)
}

/// Seeded uniform draw from the `(n−1)`-simplex.
pub fn random_distribution<T: Real>(n: usize, seed: u64) -> Result<Distribution<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_simplex(n, &mut rng)
}
