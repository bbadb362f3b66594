//! Seeded Monte Carlo checks of the analytic error probabilities and variances.
//!
//! Every trial draws from its own ChaCha8 substream keyed by `(seed, trial)`
//! and per-chunk sums are combined in chunk order, so a report depends only
//! on `(scenario, seed, trials)` and not on how rayon schedules the work.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::discrim::helstrom::{helstrom_error, helstrom_measurement, DiscriminationProblem, InputState};
use crate::error::{Error, Result};
use crate::gauss::{
    epr_heterodyne, epr_rotated_variance, make_state, photon_budget, unentangled_heterodyne,
    GaussianState, HeterodyneLaw, NoiseSpec, StateKind,
};
use crate::linops::C64;
use crate::sample::{box_muller, substream};

/// Recorded in every report so that the sampling recipe is explicit.
pub const GAUSSIAN_SAMPLER: &str = "box-muller";
pub const RNG_NAME: &str = "chacha8-stream-per-trial";

const CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub scenario: String,
    pub seed: u64,
    pub trials: u64,
    pub empirical: f64,
    pub analytic: f64,
    /// Plug-in standard error from the analytic variance.
    pub standard_error: f64,
    /// `(empirical - analytic) / standard_error`.
    pub z_score: f64,
    pub rng: &'static str,
    pub gaussian_sampler: &'static str,
}

impl TrialReport {
    fn new(scenario: String, seed: u64, trials: u64, empirical: f64, analytic: f64, standard_error: f64) -> Self {
        let diff = empirical - analytic;
        let z_score = if diff == 0.0 { 0.0 } else { diff / standard_error };
        Self {
            scenario,
            seed,
            trials,
            empirical,
            analytic,
            standard_error,
            z_score,
            rng: RNG_NAME,
            gaussian_sampler: GAUSSIAN_SAMPLER,
        }
    }
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// Mean of `f(trial_rng)` over `trials` independent substreams.
fn parallel_mean<F>(seed: u64, trials: u64, f: F) -> f64
where
    F: Fn(&mut crate::sample::SimRng) -> f64 + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = CompensatedSum::default();
            for t in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                acc.add(f(&mut substream(seed, t)));
            }
            acc.value()
        })
        .collect();
    let mut total = CompensatedSum::default();
    for p in partials {
        total.add(p);
    }
    total.value() / trials as f64
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < 1 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    Ok(())
}

/// Draws the hypothesis from the priors, applies it to the input and
/// measures the Helstrom projector; the empirical error rate is compared
/// with the closed-form minimum error probability.
pub fn sample_helstrom(p: &DiscriminationProblem, input: &InputState, trials: u64, seed: u64) -> Result<TrialReport> {
    check_trials(trials)?;
    let meas = helstrom_measurement(p, input)?;
    let analytic = helstrom_error(p, input)?;
    let [q1, q2] = meas.prob_first_given;
    let p1 = p.p1;
    let rate = parallel_mean(seed, trials, |rng| {
        let first = rng.random::<f64>() < p1;
        let says_first = rng.random::<f64>() < if first { q1 } else { q2 };
        if first != says_first {
            1.0
        } else {
            0.0
        }
    });
    let n = trials as f64;
    let se = (analytic * (1.0 - analytic) / n).sqrt().max(1.0 / n);
    Ok(TrialReport::new("helstrom".into(), seed, trials, rate, analytic, se))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Two-mode squeezed probe, EPR heterodyne, noise on both modes.
    Entangled,
    /// Vacuum probe, ordinary heterodyne, noise on the probed mode.
    Unentangled,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::Entangled => "entangled",
            Self::Unentangled => "unentangled",
        }
    }
}

pub fn heterodyne_law(x: f64, alpha: C64, nbar: f64, scheme: Scheme) -> Result<HeterodyneLaw> {
    match scheme {
        Scheme::Entangled => {
            let g = make_state(StateKind::Tmsv(x))?;
            epr_heterodyne(&g, alpha, &NoiseSpec::uniform(2, nbar)?)
        }
        Scheme::Unentangled => unentangled_heterodyne(&GaussianState::vacuum(1), alpha, nbar),
    }
}

/// Samples heterodyne outcomes from the Gaussian outcome law and compares the
/// empirical `E|z - alpha|^2` with `delta^2`.
pub fn sample_heterodyne(x: f64, alpha: C64, nbar: f64, scheme: Scheme, trials: u64, seed: u64) -> Result<TrialReport> {
    check_trials(trials)?;
    let law = heterodyne_law(x, alpha, nbar, scheme)?;
    let [[a, b], [_, d]] = law.cov;
    // Cholesky factor of the 2x2 outcome covariance
    let l11 = a.sqrt();
    let l21 = if l11 > 0.0 { b / l11 } else { 0.0 };
    let l22 = (d - l21 * l21).max(0.0).sqrt();
    let center = law.center();
    let msd = parallel_mean(seed, trials, |rng| {
        let (g1, g2) = box_muller(rng);
        let z = center + C64::new(l11 * g1, l21 * g1 + l22 * g2);
        (z - alpha).norm_sqr()
    });
    // Var(u^2 + v^2) = 2 tr(Sigma^2) for a centered Gaussian pair
    let var = 2.0 * (a * a + 2.0 * b * b + d * d);
    let se = (var / trials as f64).sqrt();
    let scenario = format!("heterodyne-{}", scheme.name());
    Ok(TrialReport::new(scenario, seed, trials, msd, law.delta_sq(), se))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityRow {
    pub phi: f64,
    /// `Var(X_phi)` of the squeezed probe.
    pub squeezed_variance: f64,
    /// Complex-plane variance of the EPR quadrature rotated by `phi`.
    pub entangled_variance: f64,
    /// Squeezed variance relative to the vacuum value `1/4`.
    pub squeezed_relative: f64,
    /// Entangled variance relative to its `x = 0` value `1`.
    pub entangled_relative: f64,
    pub squeezed_photons: f64,
    pub entangled_photons: f64,
}

/// Phase-mismatch scan comparing a squeezed probe with a two-mode probe.
pub fn stability_scan(s: f64, x: f64, phi_grid: &[f64]) -> Result<Vec<StabilityRow>> {
    if phi_grid.is_empty() {
        return Err(Error::Domain("empty phase grid".into()));
    }
    let squeezed = make_state(StateKind::Squeezed { s, x0: 0.0 })?;
    let tmsv = make_state(StateKind::Tmsv(x))?;
    let n_s = photon_budget(StateKind::Squeezed { s, x0: 0.0 })?;
    let n_e = photon_budget(StateKind::Tmsv(x))?;
    let vac = GaussianState::vacuum(2);
    let vac_epr = epr_rotated_variance(&vac, 0.0)?;
    phi_grid
        .iter()
        .map(|&phi| {
            let sq = squeezed.quadrature_variance(0, phi)?;
            let en = epr_rotated_variance(&tmsv, phi)?;
            Ok(StabilityRow {
                phi,
                squeezed_variance: sq,
                entangled_variance: en,
                squeezed_relative: sq / crate::gauss::VACUUM_VARIANCE,
                entangled_relative: en / vac_epr,
                squeezed_photons: n_s,
                entangled_photons: n_e,
            })
        })
        .collect()
}
