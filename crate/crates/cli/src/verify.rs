//! Monte-Carlo verification suites.
//!
//! Every trial draws from its own generator, seeded by
//! [`trial_seed`]`(seed, suite, trial)`, so a failing trial can be replayed in
//! isolation. A check passes when its slack (allowed minus observed deviation)
//! is nonnegative; `worst_margin` is the smallest slack seen.

use std::time::Instant;

use fidelity_lab::channels::{
    min_fidelity, random_channel_with, random_mixed_unitary_with, ChannelClass,
};
use fidelity_lab::fidelity::FidelityProbe;
use fidelity_lab::majorization::{
    aligned_dot, opposed_dot, rearrangement_extrema, sorted_descending,
};
use fidelity_lab::means::{fidelity_via_diamond, product_eigenvalues, spectral_geometric_mean};
use fidelity_lab::numerics::hermitian_eigenvalues;
use fidelity_lab::orbits::{extremal_unitary, orbit_max, orbit_min, Extremum};
use fidelity_lab::states::{
    gaussian_matrix, projection_state, random_density_with, random_unitary_with, seeded_rng,
    DensityMatrix, Order,
};
use fidelity_lab::subspaces::{
    overlap_dimension, projection_fidelity, projection_fidelity_bounds, state_vs_projection_bounds,
    OVERLAP_TOL,
};
use fidelity_lab::{fidelity, Result as LabResult, Subspace};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const MAX_DIM: usize = 12;

/// Route agreement floor for the means suite.
pub const MEANS_ROUTE_TOL: f64 = 1e-7;
/// Eigenvalue agreement floor for the means suite.
pub const MEANS_EIGEN_TOL: f64 = 1e-8;
/// Longest vectors enumerated by the rearrangement suite.
pub const REARRANGEMENT_MAX_LEN: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Orbits,
    Channels,
    Angles,
    Means,
    Rearrangement,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Orbits,
        Suite::Channels,
        Suite::Angles,
        Suite::Means,
        Suite::Rearrangement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orbits => "orbits",
            Suite::Channels => "channels",
            Suite::Angles => "angles",
            Suite::Means => "means",
            Suite::Rearrangement => "rearrangement",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(CliError::Validation(format!(
                "--dim must be in [1, {MAX_DIM}], got {}",
                self.dim
            )));
        }
        if self.trials == 0 {
            return Err(CliError::Validation("--trials must be at least 1".into()));
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return Err(CliError::Validation(format!(
                "--tol must be finite and nonnegative, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of one trial, independent of how many trials run or in what order.
pub fn trial_seed(seed: u64, suite: Suite, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ fnv1a(suite.name())) ^ trial)
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub trial: u64,
    pub trial_seed: u64,
    pub check: String,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub trials: u64,
    pub checks: u64,
    pub violations: u64,
    pub worst_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Violation>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub diagnostics: Map<String, Value>,
    #[serde(skip)]
    pub wall_time_s: f64,
}

struct Tally {
    checks: u64,
    violations: u64,
    worst: f64,
    first: Option<Violation>,
    trial: u64,
    seed: u64,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            violations: 0,
            worst: f64::INFINITY,
            first: None,
            trial: 0,
            seed: 0,
        }
    }

    fn check(&mut self, name: &str, slack: f64) {
        self.checks += 1;
        let slack = if slack.is_nan() {
            f64::NEG_INFINITY
        } else {
            slack
        };
        self.worst = self.worst.min(slack);
        if slack < 0.0 {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(Violation {
                    trial: self.trial,
                    trial_seed: self.seed,
                    check: name.to_string(),
                    slack: if slack.is_finite() { slack } else { f64::MIN },
                });
            }
        }
    }

    /// `value ≥ bound − tol`.
    fn at_least(&mut self, name: &str, value: f64, bound: f64, tol: f64) {
        self.check(name, value - bound + tol);
    }

    /// `|a − b| ≤ tol`.
    fn close(&mut self, name: &str, a: f64, b: f64, tol: f64) {
        self.check(name, tol - (a - b).abs());
    }

    fn exact(&mut self, name: &str, a: f64, b: f64, tol: f64) {
        let slack = if a.to_bits() == b.to_bits() {
            tol
        } else {
            -(a - b).abs().max(f64::MIN_POSITIVE)
        };
        self.check(name, slack);
    }
}

fn random_state(rng: &mut ChaCha8Rng, d: usize) -> LabResult<DensityMatrix> {
    let rank = rng.random_range(1..=d);
    random_density_with(rng, d, rank)
}

fn random_subspace(rng: &mut ChaCha8Rng, d: usize, m: usize) -> LabResult<Subspace> {
    Subspace::from_columns(&gaussian_matrix(rng, d, m), 1e-10)
}

/// Slack of `x ≺ y` on spectra: smallest gap in descending partial sums, and the
/// total-sum equality.
fn majorization_slack(y: &[f64], x: &[f64], tol: f64) -> f64 {
    let (sx, sy) = (sorted_descending(x), sorted_descending(y));
    let (mut px, mut py, mut slack) = (0.0, 0.0, f64::INFINITY);
    for (a, b) in sx.iter().zip(&sy) {
        px += a;
        py += b;
        slack = slack.min(py - px + tol);
    }
    slack.min(tol - (px - py).abs())
}

#[derive(Default)]
struct Diagnostics {
    max_gap_over_orbit_max: Option<f64>,
    squared_form_worst_gap: Option<f64>,
    length: Option<usize>,
}

impl Diagnostics {
    fn raise(slot: &mut Option<f64>, v: f64) {
        *slot = Some(slot.map_or(v, |s| s.max(v)));
    }

    fn into_map(self) -> Map<String, Value> {
        let mut m = Map::new();
        if let Some(v) = self.max_gap_over_orbit_max {
            m.insert("sampled_mixed_unitary_max_minus_orbit_max".into(), v.into());
        }
        if let Some(v) = self.squared_form_worst_gap {
            m.insert("squared_orbit_vs_rearrangement_worst_gap".into(), v.into());
        }
        if let Some(n) = self.length {
            m.insert("vector_length".into(), n.into());
        }
        m
    }
}

fn orbits_trial(rng: &mut ChaCha8Rng, cfg: &VerifyConfig, t: &mut Tally) -> LabResult<()> {
    let d = cfg.dim;
    let rho = random_state(rng, d)?;
    let sigma = random_state(rng, d)?;
    let (lo, hi) = (orbit_min(&rho, &sigma)?, orbit_max(&rho, &sigma)?);
    let probe = FidelityProbe::new(&rho);
    let f = probe.eval_conjugated(&sigma, &random_unitary_with(rng, d))?;
    t.at_least("sampled fidelity >= orbit_min", f, lo, cfg.tol);
    t.at_least("sampled fidelity <= orbit_max", hi, f, cfg.tol);
    for (which, want, name) in [
        (Extremum::Min, lo, "min unitary attains orbit_min"),
        (Extremum::Max, hi, "max unitary attains orbit_max"),
    ] {
        let u = extremal_unitary(&rho, &sigma, which)?;
        t.close(name, probe.eval_conjugated(&sigma, &u)?, want, cfg.tol);
    }
    Ok(())
}

fn channels_trial(
    rng: &mut ChaCha8Rng,
    cfg: &VerifyConfig,
    t: &mut Tally,
    diag: &mut Diagnostics,
) -> LabResult<()> {
    let d = cfg.dim;
    let rho = random_state(rng, d)?;
    let sigma = random_state(rng, d)?;
    let probe = FidelityProbe::new(&rho);
    let floor = rho.min_eigenvalue().sqrt();
    let lo = orbit_min(&rho, &sigma)?;

    let any = random_channel_with(rng, d, d);
    t.at_least(
        "random channel >= sqrt(lambda_min)",
        probe.eval(&any.apply(&sigma)?)?,
        floor,
        cfg.tol,
    );

    let mixed = random_mixed_unitary_with(rng, d, d);
    let out = mixed.apply(&sigma)?;
    let f = probe.eval(&out)?;
    t.at_least("mixed-unitary channel >= orbit_min", f, lo, cfg.tol);
    t.check(
        "output spectrum majorized by input spectrum",
        majorization_slack(
            sigma.spectrum(Order::Descending).values(),
            out.spectrum(Order::Descending).values(),
            cfg.tol,
        ),
    );
    Diagnostics::raise(
        &mut diag.max_gap_over_orbit_max,
        f - orbit_max(&rho, &sigma)?,
    );

    let mut values = Vec::with_capacity(3);
    for class in [
        ChannelClass::All,
        ChannelClass::Unital,
        ChannelClass::MixedUnitary,
    ] {
        let m = min_fidelity(&rho, &sigma, class)?;
        t.close(
            "witness attains class minimum",
            fidelity(&rho, &m.witness.apply(&sigma)?)?,
            m.value,
            cfg.tol,
        );
        values.push(m.value);
    }
    t.at_least(
        "all-channel minimum <= unital minimum",
        values[1],
        values[0],
        cfg.tol,
    );
    t.exact(
        "unital and mixed-unitary minima identical",
        values[1],
        values[2],
        cfg.tol,
    );
    Ok(())
}

fn angles_trial(rng: &mut ChaCha8Rng, cfg: &VerifyConfig, t: &mut Tally) -> LabResult<()> {
    let d = cfg.dim;
    let m = rng.random_range(1..=d);
    let n = rng.random_range(1..=d);
    let s = random_subspace(rng, d, m)?;
    let tt = random_subspace(rng, d, n)?;
    let pf = projection_fidelity(&s, &tt)?;
    t.close(
        "state route equals angle route",
        pf.via_states,
        pf.via_angles,
        cfg.tol,
    );
    let (lower, upper) = projection_fidelity_bounds(m, n, d)?;
    t.at_least(
        "projection fidelity >= lower bound",
        pf.value(),
        lower,
        cfg.tol,
    );
    t.at_least(
        "projection fidelity <= upper bound",
        upper,
        pf.value(),
        cfg.tol,
    );

    let basis = random_unitary_with(rng, d);
    let mut idx: Vec<usize> = (0..d).collect();
    idx.shuffle(rng);
    let si = idx[..m].to_vec();
    idx.shuffle(rng);
    let ti = idx[..n].to_vec();
    let shared = si.iter().filter(|i| ti.contains(i)).count();
    let cs = Subspace::from_frame(basis.select_columns(&si))?;
    let ct = Subspace::from_frame(basis.select_columns(&ti))?;
    let want = shared as f64 / ((m * n) as f64).sqrt();
    t.close(
        "commuting pair gives overlap ratio",
        projection_fidelity(&cs, &ct)?.value(),
        want,
        cfg.tol,
    );
    t.check(
        "overlap dimension counts shared basis vectors",
        if overlap_dimension(&cs, &ct, OVERLAP_TOL)? == shared {
            cfg.tol
        } else {
            -1.0
        },
    );

    let rho = random_state(rng, d)?;
    let b = state_vs_projection_bounds(&rho, m)?;
    let f = fidelity(&rho, &projection_state(&s))?;
    t.at_least(
        "state vs projection >= interlacing lower",
        f,
        b.lower,
        cfg.tol,
    );
    t.at_least(
        "state vs projection <= interlacing upper",
        b.upper,
        f,
        cfg.tol,
    );
    t.close(
        "eigenvector span attains lower",
        fidelity(&rho, &projection_state(&b.s_min))?,
        b.lower,
        cfg.tol,
    );
    t.close(
        "eigenvector span attains upper",
        fidelity(&rho, &projection_state(&b.s_max))?,
        b.upper,
        cfg.tol,
    );
    Ok(())
}

fn means_trial(rng: &mut ChaCha8Rng, cfg: &VerifyConfig, t: &mut Tally) -> LabResult<()> {
    let d = cfg.dim;
    let rho = random_density_with(rng, d, d)?;
    let sigma = random_density_with(rng, d, d)?;
    let route_tol = cfg.tol.max(MEANS_ROUTE_TOL);
    let eigen_tol = cfg.tol.max(MEANS_EIGEN_TOL);
    let direct = fidelity(&rho, &sigma)?;
    let r = fidelity_via_diamond(&rho, &sigma)?;
    t.close(
        "trace of spectral geometric mean",
        r.trace_diamond,
        direct,
        route_tol,
    );
    t.close(
        "sum of root eigenvalues of rho*sigma",
        r.eigen_route,
        direct,
        route_tol,
    );
    t.close(
        "diamond route vs eigen route",
        r.trace_diamond,
        r.eigen_route,
        route_tol,
    );

    let diamond = spectral_geometric_mean(rho.matrix(), sigma.matrix())?;
    let mut squared: Vec<f64> = hermitian_eigenvalues(&diamond.hermitian_part())?
        .iter()
        .map(|v| v * v)
        .collect();
    squared.sort_by(f64::total_cmp);
    let product = product_eigenvalues(&rho, &sigma)?;
    let worst = squared
        .iter()
        .zip(&product)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    t.check(
        "spectrum of squared diamond equals spectrum of rho*sigma",
        eigen_tol - worst,
    );
    Ok(())
}

fn rearrangement_trial(
    rng: &mut ChaCha8Rng,
    cfg: &VerifyConfig,
    t: &mut Tally,
    diag: &mut Diagnostics,
) -> LabResult<()> {
    let n = cfg.dim.min(REARRANGEMENT_MAX_LEN);
    diag.length = Some(n);
    let mut draw = || -> Vec<f64> {
        let v: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0.0..1.0) + f64::EPSILON)
            .collect();
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    };
    let (p, q) = (draw(), draw());
    let e = rearrangement_extrema(&p, &q)?;
    t.exact(
        "brute-force min at opposed ordering",
        e.min,
        opposed_dot(&p, &q),
        cfg.tol,
    );
    t.exact(
        "brute-force max at aligned ordering",
        e.max,
        aligned_dot(&p, &q),
        cfg.tol,
    );

    let rho = DensityMatrix::from_diagonal(&p)?;
    let sigma = DensityMatrix::from_diagonal(&q)?;
    let (lo, hi) = (orbit_min(&rho, &sigma)?, orbit_max(&rho, &sigma)?);
    let ap: Vec<f64> = p.iter().map(|v| v.sqrt()).collect();
    let aq: Vec<f64> = q.iter().map(|v| v.sqrt()).collect();
    let a = rearrangement_extrema(&ap, &aq)?;
    t.close(
        "amplitude rearrangement min equals orbit_min",
        a.min,
        lo,
        cfg.tol,
    );
    t.close(
        "amplitude rearrangement max equals orbit_max",
        a.max,
        hi,
        cfg.tol,
    );
    let gap = (e.min - lo * lo).abs().max((e.max - hi * hi).abs());
    Diagnostics::raise(&mut diag.squared_form_worst_gap, gap);
    Ok(())
}

/// Runs one suite for `cfg.trials` trials.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut tally = Tally::new();
    let mut diag = Diagnostics::default();
    for trial in 0..cfg.trials {
        let seed = trial_seed(cfg.seed, suite, trial);
        tally.trial = trial;
        tally.seed = seed;
        let mut rng = seeded_rng(seed);
        let outcome = match suite {
            Suite::Orbits => orbits_trial(&mut rng, cfg, &mut tally),
            Suite::Channels => channels_trial(&mut rng, cfg, &mut tally, &mut diag),
            Suite::Angles => angles_trial(&mut rng, cfg, &mut tally),
            Suite::Means => means_trial(&mut rng, cfg, &mut tally),
            Suite::Rearrangement => rearrangement_trial(&mut rng, cfg, &mut tally, &mut diag),
        };
        if let Err(e) = outcome {
            return Err(CliError::Invariant(format!(
                "{} trial {trial} (seed {seed}): {e}",
                suite.name()
            )));
        }
    }
    Ok(SuiteReport {
        suite: suite.name(),
        trials: cfg.trials,
        checks: tally.checks,
        violations: tally.violations,
        worst_margin: tally.worst,
        first_violation: tally.first,
        diagnostics: diag.into_map(),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize, trials: u64) -> VerifyConfig {
        VerifyConfig {
            dim,
            trials,
            seed: 0,
            tol: 1e-9,
        }
    }

    #[test]
    fn trial_seeds_differ_by_suite_and_trial() {
        let a = trial_seed(0, Suite::Orbits, 0);
        assert_ne!(a, trial_seed(0, Suite::Orbits, 1));
        assert_ne!(a, trial_seed(0, Suite::Means, 0));
        assert_ne!(a, trial_seed(1, Suite::Orbits, 0));
        assert_eq!(a, trial_seed(0, Suite::Orbits, 0));
    }

    #[test]
    fn every_suite_is_clean_at_small_scale() {
        for suite in Suite::ALL {
            for d in [1, 2, 4] {
                let r = run_suite(suite, &cfg(d, 30)).unwrap();
                assert_eq!(r.violations, 0, "{suite:?} d={d}: {:?}", r.first_violation);
                assert!(r.checks >= 30);
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_value(run_suite(Suite::Channels, &cfg(3, 20)).unwrap()).unwrap();
        let b = serde_json::to_value(run_suite(Suite::Channels, &cfg(3, 20)).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tally_records_first_violation() {
        let mut t = Tally::new();
        t.trial = 7;
        t.seed = 42;
        t.close("demo", 1.0, 1.1, 1e-9);
        t.close("demo", 1.0, 1.0, 1e-9);
        assert_eq!(t.violations, 1);
        let v = t.first.unwrap();
        assert_eq!((v.trial, v.trial_seed), (7, 42));
        assert!(v.slack < 0.0);
    }

    #[test]
    fn validation() {
        assert!(cfg(0, 1).validate().is_err());
        assert!(cfg(13, 1).validate().is_err());
        assert!(cfg(12, 0).validate().is_err());
        assert!(VerifyConfig {
            tol: f64::NAN,
            ..cfg(2, 1)
        }
        .validate()
        .is_err());
        assert!(cfg(12, 1).validate().is_ok());
    }

    #[test]
    fn majorization_slack_signs() {
        assert!(majorization_slack(&[1.0, 0.0], &[0.5, 0.5], 0.0) >= 0.0);
        assert!(majorization_slack(&[0.5, 0.5], &[1.0, 0.0], 0.0) < 0.0);
    }
}
