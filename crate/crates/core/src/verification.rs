//! Executable checks for the eight defining properties of an entropy
//! functional, plus the one-boundedness claim for Lin entropy.
//!
//! A check never stops at the first problem. Every trial yields a
//! nonnegative *shortfall*: how far that trial is from satisfying the
//! property, strictness margin included. The report keeps the largest one and
//! passes iff it does not exceed the property's tolerance. Failing reports
//! carry the distribution(s) that produced the worst shortfall.
//!
//! | Property | Trial shortfall |
//! |----------|-----------------|
//! | I nonnegativity | `max(0, −F(p))` |
//! | II continuity | `|F(p) − F(p′)|` with `‖p − p′‖₁ ≤ 1e-3` (tolerance 0.01) |
//! | III symmetry | `|F(p) − F(σp)|` for a random permutation `σ` |
//! | IV concavity | `max(0, m − slack)` for well-separated pairs, `max(0, −slack)` otherwise |
//! | V expectation | expectation identity, and `I ≥ 0`, first differences `> m`, second differences `> m` on a grid |
//! | VI minimality | `|F(δ)|` on point masses, `max(0, m − F(p))` otherwise |
//! | VII maximality | `max(0, m − (F(U_N) − F(q)))` for random non-uniform `q` |
//! | VIII monotonicity | `max(0, m − (F(U_{N+1}) − F(U_N)))` |
//! | one-bounded | `max(0, −F(p), F(p) − 1 + m)` |
//!
//! Here `m` is [`SuiteConfig::strict_margin`]. Each property draws from its
//! own ChaCha stream keyed by `(seed, property)`, so running the checks in
//! parallel cannot change a report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{format_masses, format_real};
use crate::distributions::{sample_simplex, uniform_distribution, MassFunction};
use crate::error::{Error, Result};
use crate::sum::compensated_sum;
use crate::{lin, DistributionF64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PropertyId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    #[serde(rename = "one-bounded")]
    OneBounded,
}

impl PropertyId {
    pub const ALL: [PropertyId; 9] = [
        PropertyId::I,
        PropertyId::II,
        PropertyId::III,
        PropertyId::IV,
        PropertyId::V,
        PropertyId::VI,
        PropertyId::VII,
        PropertyId::VIII,
        PropertyId::OneBounded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyId::I => "nonnegativity",
            PropertyId::II => "continuity",
            PropertyId::III => "symmetry",
            PropertyId::IV => "concavity",
            PropertyId::V => "expectation",
            PropertyId::VI => "minimality",
            PropertyId::VII => "maximality",
            PropertyId::VIII => "monotonicity",
            PropertyId::OneBounded => "one-boundedness",
        }
    }

    fn code(self) -> &'static str {
        match self {
            PropertyId::I => "I",
            PropertyId::II => "II",
            PropertyId::III => "III",
            PropertyId::IV => "IV",
            PropertyId::V => "V",
            PropertyId::VI => "VI",
            PropertyId::VII => "VII",
            PropertyId::VIII => "VIII",
            PropertyId::OneBounded => "one-bounded",
        }
    }

    fn stream(self) -> u64 {
        self as u64
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            PropertyId::II => 1e-2,
            _ => 1e-12,
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.code().eq_ignore_ascii_case(s) || p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }
}

/// A candidate entropy functional under test.
pub trait EntropyFunctional: Sync {
    fn name(&self) -> &str;

    fn evaluate(&self, p: &DistributionF64) -> f64;

    /// Per-symbol information `I` with `F(p) = Σ p(x) I(p(x))`, if the
    /// functional has one that does not depend on the alphabet.
    fn surprisal(&self, prob: f64) -> Option<f64>;

    /// `F(U_n)`. Override when a closed form exists.
    fn on_uniform(&self, n: usize) -> f64 {
        self.evaluate(&uniform_distribution(n).expect("n >= 1"))
    }
}

/// The functionals the CLI can put under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Functional {
    /// Lin entropy `H*`.
    Lin,
    /// `H / log₂ N`, taken as 0 on a single-symbol alphabet.
    NormalizedShannon,
    /// `1 − Σ p²`.
    Logical,
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lin" => Ok(Functional::Lin),
            "shannon-normalized" | "normalized-shannon" => Ok(Functional::NormalizedShannon),
            "logical" => Ok(Functional::Logical),
            other => Err(Error::InvalidConfig(format!("unknown functional {other:?}"))),
        }
    }
}

impl EntropyFunctional for Functional {
    fn name(&self) -> &str {
        match self {
            Functional::Lin => "lin",
            Functional::NormalizedShannon => "shannon-normalized",
            Functional::Logical => "logical",
        }
    }

    fn evaluate(&self, p: &DistributionF64) -> f64 {
        match self {
            Functional::Lin => lin::lin_entropy(p),
            Functional::NormalizedShannon => {
                crate::normalized_shannon_entropy(p).unwrap_or(0.0)
            }
            Functional::Logical => lin::logical_entropy(p),
        }
    }

    fn surprisal(&self, prob: f64) -> Option<f64> {
        match self {
            Functional::Lin => lin::lin_surprisal(prob).ok(),
            // −log₂ α / log₂ N depends on N.
            Functional::NormalizedShannon => None,
            Functional::Logical => Some(1.0 - prob),
        }
    }

    fn on_uniform(&self, n: usize) -> f64 {
        match self {
            Functional::Lin => lin::lin_entropy_uniform(n).expect("n >= 1"),
            Functional::NormalizedShannon => {
                if n == 1 {
                    0.0
                } else {
                    1.0
                }
            }
            Functional::Logical => 1.0 - 1.0 / n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    /// Random trials per property (per alphabet size for VII).
    pub trials: usize,
    /// Largest alphabet used for random distributions.
    pub max_alphabet: usize,
    /// Uniform sweep for VIII and one-boundedness runs over `1..=max_uniform`.
    pub max_uniform: usize,
    pub seed: u64,
    /// Smallest gap accepted as strict.
    pub strict_margin: f64,
    pub tolerances: BTreeMap<PropertyId, f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            max_alphabet: 64,
            max_uniform: 10_000,
            seed: 0x5eed,
            strict_margin: 1e-9,
            tolerances: PropertyId::ALL
                .into_iter()
                .map(|p| (p, p.default_tolerance()))
                .collect(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.max_alphabet < 2 {
            return Err(Error::InvalidConfig("max_alphabet must be at least 2".into()));
        }
        if self.max_uniform < 2 {
            return Err(Error::InvalidConfig("max_uniform must be at least 2".into()));
        }
        if !(self.strict_margin >= 0.0 && self.strict_margin.is_finite()) {
            return Err(Error::InvalidConfig("strict_margin must be finite and >= 0".into()));
        }
        if let Some((p, t)) = self.tolerances.iter().find(|(_, t)| t.is_nan() || **t < 0.0) {
            return Err(Error::InvalidConfig(format!("tolerance {t} for property {p}")));
        }
        Ok(())
    }

    pub fn tolerance(&self, id: PropertyId) -> f64 {
        self.tolerances
            .get(&id)
            .copied()
            .unwrap_or_else(|| id.default_tolerance())
    }

    fn rng(&self, id: PropertyId) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id.stream());
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub name: &'static str,
    pub functional: String,
    pub passed: bool,
    pub trials: u64,
    pub worst_violation: f64,
    pub tolerance: f64,
    /// Sub-check responsible for the failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_check: Option<&'static str>,
    /// Masses of the offending distribution(s), comma separated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

impl PropertyReport {
    /// Tab-separated record: status, id, name, trials, worst, tolerance, and
    /// for failures the sub-check and witnesses.
    pub fn to_record(&self) -> String {
        let mut line = format!(
            "{}\t{}\t{}\ttrials={}\tworst={}\ttol={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.property,
            self.name,
            self.trials,
            format_real(self.worst_violation),
            format_real(self.tolerance),
        );
        if let Some(check) = self.failed_check {
            line.push_str("\tcheck=");
            line.push_str(check);
        }
        if let Some(w) = &self.witness {
            line.push_str("\twitness=");
            line.push_str(&w.join(" | "));
        }
        line
    }
}

struct Tracker {
    tolerance: f64,
    trials: u64,
    worst: f64,
    failed_check: Option<&'static str>,
    witness: Option<Vec<String>>,
}

impl Tracker {
    fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            trials: 0,
            worst: 0.0,
            failed_check: None,
            witness: None,
        }
    }

    fn observe(&mut self, shortfall: f64, check: &'static str, witness: impl FnOnce() -> Vec<String>) {
        self.trials += 1;
        let s = if shortfall.is_finite() { shortfall } else { f64::MAX };
        if s > self.worst {
            self.worst = s;
            if s > self.tolerance {
                self.failed_check = Some(check);
                self.witness = Some(witness());
            }
        }
    }

    fn finish(self, id: PropertyId, functional: &dyn EntropyFunctional) -> PropertyReport {
        let passed = self.worst <= self.tolerance;
        PropertyReport {
            property: id,
            name: id.name(),
            functional: functional.name().to_string(),
            passed,
            trials: self.trials,
            worst_violation: self.worst,
            tolerance: self.tolerance,
            failed_check: if passed { None } else { self.failed_check },
            witness: if passed { None } else { self.witness },
        }
    }
}

fn witness(ps: &[&DistributionF64]) -> Vec<String> {
    ps.iter().map(|p| format_masses(p.masses())).collect()
}

fn random_dist(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> DistributionF64 {
    let n = rng.random_range(lo..=hi.max(lo));
    sample_simplex(n, rng).expect("n >= 1")
}

fn bernoulli(a: f64) -> DistributionF64 {
    DistributionF64::from_masses(vec![a, 1.0 - a]).expect("a in [0, 1]")
}

/// Grid over `[0.01, 0.99]` with step `1e-3`.
fn surprisal_grid() -> impl Iterator<Item = f64> {
    (0..=980).map(|k| 0.01 + k as f64 * 1e-3)
}

const GRID_STEP: f64 = 1e-3;
const CONTINUITY_RADIUS: f64 = 1e-3;
const UNIFORM_EXCLUSION: f64 = 1e-6;

/// Runs one property check against `functional`. Deterministic given
/// `cfg.seed`.
pub fn check_property(
    id: PropertyId,
    functional: &dyn EntropyFunctional,
    cfg: &SuiteConfig,
) -> Result<PropertyReport> {
    cfg.validate()?;
    let mut rng = cfg.rng(id);
    let mut t = Tracker::new(cfg.tolerance(id));
    let f = functional;
    let margin = cfg.strict_margin;
    let max_n = cfg.max_alphabet;

    match id {
        PropertyId::I => {
            for n in 1..=max_n {
                let u = uniform_distribution(n)?;
                t.observe((-f.evaluate(&u)).max(0.0), "uniform", || witness(&[&u]));
                let d = DistributionF64::degenerate(n, n - 1)?;
                t.observe((-f.evaluate(&d)).max(0.0), "degenerate", || witness(&[&d]));
            }
            for _ in 0..cfg.trials {
                let p = random_dist(&mut rng, 1, max_n);
                t.observe((-f.evaluate(&p)).max(0.0), "random", || witness(&[&p]));
            }
        }
        PropertyId::II => {
            for trial in 0..cfg.trials {
                let n = rng.random_range(2..=max_n);
                let base = if trial % 2 == 0 {
                    sample_simplex(n, &mut rng)?
                } else {
                    DistributionF64::degenerate(n, rng.random_range(0..n))?
                };
                let target = sample_simplex(n, &mut rng)?;
                let dist = base.l1_distance(&target)?;
                if dist == 0.0 {
                    continue;
                }
                let step = (CONTINUITY_RADIUS * rng.random::<f64>() / dist).min(1.0);
                let moved = base.mix(&target, 1.0 - step)?;
                let gap = (f.evaluate(&base) - f.evaluate(&moved)).abs();
                t.observe(gap, "modulus", || witness(&[&base, &moved]));
            }
        }
        PropertyId::III => {
            for _ in 0..cfg.trials {
                let p = random_dist(&mut rng, 1, max_n);
                let mut order: Vec<usize> = (0..p.len()).collect();
                order.shuffle(&mut rng);
                let q = p.permuted(&order)?;
                let gap = (f.evaluate(&p) - f.evaluate(&q)).abs();
                t.observe(gap, "permutation", || witness(&[&p, &q]));
            }
        }
        PropertyId::IV => {
            for trial in 0..cfg.trials {
                let n = rng.random_range(1..=max_n);
                let p = sample_simplex(n, &mut rng)?;
                let q = sample_simplex(n, &mut rng)?;
                let lambda = (1 + trial % 9) as f64 / 10.0;
                let mixed = p.mix(&q, lambda)?;
                let slack = f.evaluate(&mixed)
                    - (lambda * f.evaluate(&p) + (1.0 - lambda) * f.evaluate(&q));
                if p.l1_distance(&q)? >= 1e-3 {
                    t.observe((margin - slack).max(0.0), "strict", || witness(&[&p, &q]));
                } else {
                    t.observe((-slack).max(0.0), "mixture", || witness(&[&p, &q]));
                }
            }
        }
        PropertyId::V => check_expectation(f, cfg, &mut rng, &mut t)?,
        PropertyId::VI => {
            for n in 1..=max_n {
                for at in 0..n {
                    let d = DistributionF64::degenerate(n, at)?;
                    t.observe(f.evaluate(&d).abs(), "zero-on-point-mass", || witness(&[&d]));
                }
            }
            for n in 2..=max_n {
                let u = uniform_distribution(n)?;
                t.observe((margin - f.evaluate(&u)).max(0.0), "positive-elsewhere", || {
                    witness(&[&u])
                });
            }
            for _ in 0..cfg.trials {
                let p = random_dist(&mut rng, 2, max_n);
                if p.max_mass() >= 1.0 - 1e-12 {
                    continue;
                }
                t.observe((margin - f.evaluate(&p)).max(0.0), "positive-elsewhere", || {
                    witness(&[&p])
                });
            }
        }
        PropertyId::VII => {
            for n in 2..=max_n {
                let u = uniform_distribution(n)?;
                let top = f.evaluate(&u);
                let mut accepted = 0usize;
                while accepted < cfg.trials {
                    let q: DistributionF64 = sample_simplex(n, &mut rng)?;
                    let far = q.masses().iter().any(|&m| (m - 1.0 / n as f64).abs() >= UNIFORM_EXCLUSION);
                    if !far {
                        continue;
                    }
                    accepted += 1;
                    let gap = top - f.evaluate(&q);
                    t.observe((margin - gap).max(0.0), "uniform-dominates", || witness(&[&u, &q]));
                }
            }
        }
        PropertyId::VIII => {
            let mut prev = f.on_uniform(1);
            for n in 1..cfg.max_uniform {
                let next = f.on_uniform(n + 1);
                t.observe((margin - (next - prev)).max(0.0), "strict-increase", || {
                    let a = uniform_distribution(n).expect("n >= 1");
                    let b = uniform_distribution(n + 1).expect("n >= 1");
                    witness(&[&a, &b])
                });
                prev = next;
            }
        }
        PropertyId::OneBounded => {
            let shortfall = |v: f64| (-v).max(v - 1.0 + margin).max(0.0);
            for n in 1..=cfg.max_uniform {
                t.observe(shortfall(f.on_uniform(n)), "uniform", || {
                    witness(&[&uniform_distribution(n).expect("n >= 1")])
                });
            }
            for _ in 0..cfg.trials {
                let p = random_dist(&mut rng, 1, max_n);
                t.observe(shortfall(f.evaluate(&p)), "random", || witness(&[&p]));
            }
        }
    }
    Ok(t.finish(id, functional))
}

fn check_expectation(
    f: &dyn EntropyFunctional,
    cfg: &SuiteConfig,
    rng: &mut ChaCha8Rng,
    t: &mut Tracker,
) -> Result<()> {
    let margin = cfg.strict_margin;
    if f.surprisal(0.5).is_none() {
        let u = uniform_distribution(2)?;
        t.observe(f64::MAX, "surprisal-exists", || witness(&[&u]));
        return Ok(());
    }
    let surprisal = |a: f64| f.surprisal(a).unwrap_or(f64::NAN);

    for _ in 0..cfg.trials {
        let p = random_dist(rng, 1, cfg.max_alphabet);
        let expected = compensated_sum(
            p.masses()
                .iter()
                .filter(|&&m| m > 0.0)
                .map(|&m| m * surprisal(m)),
        );
        let gap = (f.evaluate(&p) - expected).abs();
        t.observe(gap, "expectation-form", || witness(&[&p]));
    }
    for a in [0.0, 1.0].into_iter().chain(surprisal_grid()) {
        t.observe((-surprisal(a)).max(0.0), "surprisal-nonnegative", || {
            witness(&[&bernoulli(a)])
        });
    }
    for a in surprisal_grid() {
        let (lo, mid, hi) = (surprisal(a - GRID_STEP), surprisal(a), surprisal(a + GRID_STEP));
        t.observe((margin - (mid - hi)).max(0.0), "surprisal-decreasing", || {
            witness(&[&bernoulli(a)])
        });
        let second = lo - 2.0 * mid + hi;
        t.observe((margin - second).max(0.0), "surprisal-strictly-convex", || {
            witness(&[&bernoulli(a)])
        });
    }
    Ok(())
}

/// One report per property I–VIII followed by one-boundedness.
pub fn run_suite(functional: &dyn EntropyFunctional, cfg: &SuiteConfig) -> Result<Vec<PropertyReport>> {
    cfg.validate()?;
    PropertyId::ALL
        .par_iter()
        .map(|&id| check_property(id, functional, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            trials: 50,
            max_alphabet: 12,
            max_uniform: 500,
            ..SuiteConfig::default()
        }
    }

    struct ZeroOnCoin;

    impl EntropyFunctional for ZeroOnCoin {
        fn name(&self) -> &str {
            "zero-on-coin"
        }

        fn evaluate(&self, p: &DistributionF64) -> f64 {
            if p.masses() == [0.5, 0.5] {
                0.0
            } else {
                lin::lin_entropy(p)
            }
        }

        fn surprisal(&self, prob: f64) -> Option<f64> {
            lin::lin_surprisal(prob).ok()
        }
    }

    #[test]
    fn property_ids_parse() {
        assert_eq!("VIII".parse::<PropertyId>().unwrap(), PropertyId::VIII);
        assert_eq!("concavity".parse::<PropertyId>().unwrap(), PropertyId::IV);
        assert_eq!("one-bounded".parse::<PropertyId>().unwrap(), PropertyId::OneBounded);
        assert_eq!(
            "IX".parse::<PropertyId>().unwrap_err(),
            Error::UnknownProperty("IX".into())
        );
    }

    #[test]
    fn functionals_parse() {
        assert_eq!("lin".parse::<Functional>().unwrap(), Functional::Lin);
        assert_eq!(
            "normalized-shannon".parse::<Functional>().unwrap(),
            Functional::NormalizedShannon
        );
        assert!("renyi".parse::<Functional>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = small();
        cfg.trials = 0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
        let mut cfg = small();
        cfg.max_alphabet = 1;
        assert!(check_property(PropertyId::I, &Functional::Lin, &cfg).is_err());
    }

    #[test]
    fn monotonicity_passes_with_zero_violation_for_lin() {
        let r = check_property(PropertyId::VIII, &Functional::Lin, &SuiteConfig::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.worst_violation, 0.0);
        assert_eq!(r.trials, 9_999);
        assert!(r.witness.is_none());
    }

    #[test]
    fn nonnegativity_passes_for_lin() {
        let r = check_property(PropertyId::I, &Functional::Lin, &SuiteConfig::default()).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn minimality_catches_fault_injected_functional() {
        let r = check_property(PropertyId::VI, &ZeroOnCoin, &small()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.failed_check, Some("positive-elsewhere"));
        assert_eq!(r.witness.as_deref(), Some(&["0.500000000000000,0.500000000000000".to_string()][..]));
    }

    #[test]
    fn suite_passes_for_lin_at_small_scale() {
        let reports = run_suite(&Functional::Lin, &small()).unwrap();
        assert_eq!(reports.len(), 9);
        for r in &reports {
            assert!(r.passed, "{}", r.to_record());
        }
    }

    #[test]
    fn single_trial_suite_is_deterministic() {
        let cfg = SuiteConfig { trials: 1, ..small() };
        let a = run_suite(&Functional::Lin, &cfg).unwrap();
        let b = run_suite(&Functional::Lin, &cfg).unwrap();
        assert_eq!(a.len(), 9);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn counterfeits_fail_what_they_violate() {
        let cfg = small();
        let ns = run_suite(&Functional::NormalizedShannon, &cfg).unwrap();
        let viii = ns.iter().find(|r| r.property == PropertyId::VIII).unwrap();
        assert!(!viii.passed);
        assert_eq!(viii.witness.as_ref().unwrap().len(), 2);

        let logical = run_suite(&Functional::Logical, &cfg).unwrap();
        for r in &logical {
            if r.property == PropertyId::V {
                assert!(!r.passed);
                assert_eq!(r.failed_check, Some("surprisal-strictly-convex"));
            } else {
                assert!(r.passed, "{}", r.to_record());
            }
        }
    }

    #[test]
    fn record_line_shape() {
        let r = check_property(PropertyId::VI, &ZeroOnCoin, &small()).unwrap();
        let line = r.to_record();
        assert!(line.starts_with("FAIL\tVI\tminimality\t"));
        assert!(line.contains("check=positive-elsewhere"));
        assert!(line.contains("witness=0.5"));
    }
}
