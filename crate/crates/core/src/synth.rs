//! Synthetic ROD-schema data.
//!
//! Features are drawn independently: gender and indigenous status as coin
//! flips, age and disadvantage as uniform ordinal codes, and the seven count
//! features as Poisson variables. The label follows a logistic model whose
//! intercept is calibrated to hit a target positive-class prior. None of the
//! marginals are fitted to the real data; they only give a dataset with the
//! right size, prior and a known importance order.

use rand::Rng as _;
use rand_distr::{Bernoulli, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::rng::{self, Rng, Stream};
use crate::schema::{Dataset, FeatureSchema, Record, AGE_CATEGORIES, DISADVANTAGE_QUARTILES};

pub const DEFAULT_N: usize = 14_776;
pub const DEFAULT_PRIOR: f64 = 0.08;
pub const DEFAULT_SEED: u64 = 42;

/// Logistic weights in schema order (G, A, IS, DA, CO, AB, PC, P5, P2, PO, PP).
pub const DEFAULT_WEIGHTS: [f64; 11] = [0.0, 0.0, 0.0, 0.0, 0.1, 0.0, 0.5, 0.0, 0.0, 0.4, 0.9];

/// Intercept for [`DEFAULT_WEIGHTS`] and [`DEFAULT_PRIOR`], found with
/// [`calibrate_intercept`] at tolerance 1e-5 with the default seed.
pub const DEFAULT_INTERCEPT: f64 = -4.219_055_175_781_25;

/// Number of Monte Carlo draws used by calibration.
pub const CALIBRATION_SAMPLES: usize = 200_000;

const P_MALE: f64 = 0.8;
const P_INDIGENOUS: f64 = 0.25;
/// Poisson means for CO, AB, PC, P5, P2, PO, PP.
const COUNT_MEANS: [f64; 7] = [2.0, 0.2, 1.5, 0.1, 0.1, 0.6, 0.3];

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub target_prior: f64,
    pub seed: u64,
    pub weights: Vec<f64>,
    /// `None` means "use the calibrated default", which only exists for the
    /// default weights and prior.
    pub intercept: Option<f64>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n: DEFAULT_N,
            target_prior: DEFAULT_PRIOR,
            seed: DEFAULT_SEED,
            weights: DEFAULT_WEIGHTS.to_vec(),
            intercept: None,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(self.target_prior > 0.0 && self.target_prior < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "target prior {} not in (0, 1)",
                self.target_prior
            )));
        }
        if self.weights.len() != DEFAULT_WEIGHTS.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} weights, got {}",
                DEFAULT_WEIGHTS.len(),
                self.weights.len()
            )));
        }
        Ok(())
    }

    fn is_default_model(&self) -> bool {
        self.target_prior == DEFAULT_PRIOR && self.weights == DEFAULT_WEIGHTS
    }

    pub fn resolved_intercept(&self) -> Result<f64> {
        match self.intercept {
            Some(b) => Ok(b),
            None if self.is_default_model() => Ok(DEFAULT_INTERCEPT),
            None => Err(Error::Uncalibrated),
        }
    }

    /// Human-readable record of every generator parameter.
    pub fn provenance(&self) -> String {
        let intercept = self
            .resolved_intercept()
            .map(|b| b.to_string())
            .unwrap_or_else(|_| "uncalibrated".into());
        let weights: Vec<String> = FeatureSchema::rod()
            .codes()
            .zip(&self.weights)
            .map(|(c, w)| format!("{c}={w}"))
            .collect();
        format!(
            "synthetic seed={} n={} prior={} intercept={} weights[{}] \
             G~Bern({P_MALE}) A~U{{0..{}}} IS~Bern({P_INDIGENOUS}) DA~U{{0..{}}} \
             CO,AB,PC,P5,P2,PO,PP~Poisson({}) (independent stand-in, not ROD data)",
            self.seed,
            self.n,
            self.target_prior,
            intercept,
            weights.join(" "),
            AGE_CATEGORIES - 1,
            DISADVANTAGE_QUARTILES - 1,
            COUNT_MEANS.map(|m| m.to_string()).join(","),
        )
    }
}

struct FeatureSampler {
    male: Bernoulli,
    indigenous: Bernoulli,
    counts: Vec<Poisson<f64>>,
}

impl FeatureSampler {
    fn new() -> Self {
        Self {
            male: Bernoulli::new(P_MALE).expect("valid probability"),
            indigenous: Bernoulli::new(P_INDIGENOUS).expect("valid probability"),
            counts: COUNT_MEANS
                .iter()
                .map(|&m| Poisson::new(m).expect("positive mean"))
                .collect(),
        }
    }

    fn sample(&self, rng: &mut Rng) -> Vec<i64> {
        let mut v = Vec::with_capacity(11);
        v.push(i64::from(self.male.sample(rng)));
        v.push(rng.gen_range(0..AGE_CATEGORIES));
        v.push(i64::from(self.indigenous.sample(rng)));
        v.push(rng.gen_range(0..DISADVANTAGE_QUARTILES));
        for p in &self.counts {
            v.push(p.sample(rng) as i64);
        }
        v
    }
}

fn linear(weights: &[f64], values: &[i64]) -> f64 {
    weights.iter().zip(values).map(|(w, &x)| w * x as f64).sum()
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

pub fn generate(config: &GeneratorConfig) -> Result<Dataset> {
    config.validate()?;
    let intercept = config.resolved_intercept()?;
    let sampler = FeatureSampler::new();
    let mut rng = rng::seeded(config.seed, Stream::Generate);
    let records = (0..config.n)
        .map(|_| {
            let values = sampler.sample(&mut rng);
            let p = sigmoid(intercept + linear(&config.weights, &values));
            let y = u8::from(rng.gen::<f64>() < p);
            Record::labeled(values, y)
        })
        .collect();
    Dataset::new(FeatureSchema::rod(), records, config.provenance())
}

/// Mean model probability of class 1 over a fresh sample of feature vectors.
pub fn expected_prior(config: &GeneratorConfig, intercept: f64, samples: usize, seed: u64) -> f64 {
    let sampler = FeatureSampler::new();
    let mut rng = rng::seeded(seed, Stream::Calibrate);
    let total: f64 = (0..samples)
        .map(|_| sigmoid(intercept + linear(&config.weights, &sampler.sample(&mut rng))))
        .sum();
    total / samples as f64
}

/// Bisects the intercept until the Monte Carlo positive ratio over
/// [`CALIBRATION_SAMPLES`] feature vectors is within `tolerance` of the
/// target prior. The result is stored in `config.intercept`.
pub fn calibrate_intercept(
    config: &mut GeneratorConfig,
    tolerance: f64,
    max_iter: usize,
) -> Result<f64> {
    config.validate()?;
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tolerance} must be positive"
        )));
    }
    let sampler = FeatureSampler::new();
    let mut rng = rng::seeded(config.seed, Stream::Calibrate);
    let scores: Vec<f64> = (0..CALIBRATION_SAMPLES)
        .map(|_| linear(&config.weights, &sampler.sample(&mut rng)))
        .collect();
    let estimate =
        |b: f64| scores.iter().map(|&s| sigmoid(b + s)).sum::<f64>() / scores.len() as f64;

    let target = config.target_prior;
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let p = estimate(mid);
        if (p - target).abs() <= tolerance {
            config.intercept = Some(mid);
            return Ok(mid);
        }
        if p < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Calibration {
        iterations: max_iter,
        low: lo,
        high: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_conform_to_schema() {
        let cfg = GeneratorConfig {
            n: 2_000,
            ..GeneratorConfig::default()
        };
        let d = generate(&cfg).unwrap();
        assert_eq!(d.len(), 2_000);
        let schema = FeatureSchema::rod();
        for r in &d.records {
            schema.validate(r).unwrap();
        }
        assert!(d.provenance.contains("seed=42"));
        assert!(d.provenance.contains("not ROD"));
    }

    #[test]
    fn zero_records_is_an_error() {
        let cfg = GeneratorConfig {
            n: 0,
            ..GeneratorConfig::default()
        };
        assert!(matches!(generate(&cfg), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn same_seed_same_data() {
        let cfg = GeneratorConfig {
            n: 500,
            ..GeneratorConfig::with_seed(7)
        };
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = GeneratorConfig {
            seed: 8,
            ..cfg.clone()
        };
        assert_ne!(
            generate(&cfg).unwrap().records,
            generate(&other).unwrap().records
        );
    }

    #[test]
    fn non_default_prior_requires_calibration() {
        let mut cfg = GeneratorConfig {
            n: 100,
            target_prior: 0.2,
            ..GeneratorConfig::default()
        };
        assert!(matches!(generate(&cfg), Err(Error::Uncalibrated)));
        calibrate_intercept(&mut cfg, 1e-3, 60).unwrap();
        assert!(generate(&cfg).is_ok());
    }

    #[test]
    fn symmetric_prior_with_zero_weights_gives_zero_intercept() {
        let mut cfg = GeneratorConfig {
            target_prior: 0.5,
            weights: vec![0.0; 11],
            ..GeneratorConfig::default()
        };
        let b = calibrate_intercept(&mut cfg, 1e-6, 80).unwrap();
        assert!(b.abs() < 1e-4, "{b}");
        assert_eq!(cfg.intercept, Some(b));
    }

    #[test]
    fn default_intercept_is_the_calibrated_value() {
        let mut cfg = GeneratorConfig::default();
        let b = calibrate_intercept(&mut cfg, 1e-5, 100).unwrap();
        assert!(b < 0.0);
        assert_eq!(b, DEFAULT_INTERCEPT);
    }

    #[test]
    fn calibration_reports_bracket_on_failure() {
        let mut cfg = GeneratorConfig::default();
        match calibrate_intercept(&mut cfg, 1e-12, 3) {
            Err(Error::Calibration {
                iterations,
                low,
                high,
            }) => {
                assert_eq!(iterations, 3);
                assert!(low < high);
            }
            other => panic!("expected calibration error, got {other:?}"),
        }
        assert!(calibrate_intercept(&mut cfg, 0.0, 10).is_err());
    }
}
