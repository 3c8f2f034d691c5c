//! MTSFM waveform synthesis.
//!
//! A Multi-Tone Sinusoidal Frequency Modulated waveform is defined by a
//! finite Fourier series for its instantaneous frequency
//!
//! ```text
//! m(t) = a0/2 + sum_k a_k cos(2 pi k t / T) + b_k sin(2 pi k t / T)
//! ```
//!
//! on `t in [-T/2, T/2]`. Integrating gives the phase function with
//! modulation indices `alpha_k = a_k T / k`, `beta_k = b_k T / k`.
//! Waveforms are synthesized as unit-energy constant-envelope complex
//! sequences, either at complex baseband (carrier handled by `fc`
//! bookkeeping) or as an at-carrier analytic signal.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::WaveError;

/// Fourier-series coefficients of the modulation function plus the pulse
/// duration. This is the design variable for every waveform in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierModulation {
    /// Frequency offset coefficient (Hz). The mean of `m(t)` is `a0/2`.
    pub a0: f64,
    /// Cosine-harmonic amplitudes `a_k` (Hz), `k = 1..=K`.
    pub a: Vec<f64>,
    /// Sine-harmonic amplitudes `b_k` (Hz), `k = 1..=K`.
    pub b: Vec<f64>,
    /// Pulse duration (s).
    pub t_dur: f64,
}

impl FourierModulation {
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>, t_dur: f64) -> Result<Self, WaveError> {
        if a.is_empty() || a.len() != b.len() {
            return Err(WaveError::InvalidParameter(format!(
                "need K = len(a) = len(b) >= 1, got len(a) = {}, len(b) = {}",
                a.len(),
                b.len()
            )));
        }
        if !(t_dur > 0.0) {
            return Err(WaveError::InvalidParameter(format!("T = {t_dur} must be > 0")));
        }
        if !a0.is_finite() || a.iter().chain(b.iter()).any(|c| !c.is_finite()) {
            return Err(WaveError::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(Self { a0, a, b, t_dur })
    }

    /// A continuous-wave pulse: all harmonic coefficients zero.
    pub fn cw(t_dur: f64) -> Self {
        Self { a0: 0.0, a: vec![0.0], b: vec![0.0], t_dur }
    }

    /// Harmonic count K.
    pub fn harmonic_count(&self) -> usize {
        self.a.len()
    }

    /// Modulation indices `(alpha_k, beta_k) = (a_k T / k, b_k T / k)`.
    pub fn modulation_indices(&self) -> Vec<(f64, f64)> {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(i, (&ak, &bk))| {
                let k = (i + 1) as f64;
                (ak * self.t_dur / k, bk * self.t_dur / k)
            })
            .collect()
    }

    /// Instantaneous frequency `m(t)` in Hz.
    ///
    /// `t` must lie within the pulse support `[-T/2, T/2]`.
    pub fn modulation_at(&self, t: f64) -> Result<f64, WaveError> {
        self.check_domain(t)?;
        Ok(self.modulation_unchecked(t))
    }

    pub(crate) fn modulation_unchecked(&self, t: f64) -> f64 {
        let w0 = 2.0 * PI / self.t_dur;
        let mut m = self.a0 / 2.0;
        for (i, (&ak, &bk)) in self.a.iter().zip(&self.b).enumerate() {
            let kw = (i + 1) as f64 * w0 * t;
            m += ak * kw.cos() + bk * kw.sin();
        }
        m
    }

    /// Phase function `phi(t)` in radians,
    /// `phi(t) = pi a0 t + sum_k alpha_k sin(2 pi k t/T) - beta_k cos(2 pi k t/T)`.
    ///
    /// The derivative of `phi` divided by `2 pi` is the modulation function.
    pub fn phase_at(&self, t: f64) -> Result<f64, WaveError> {
        self.check_domain(t)?;
        Ok(self.phase_unchecked(t))
    }

    pub(crate) fn phase_unchecked(&self, t: f64) -> f64 {
        let w0 = 2.0 * PI / self.t_dur;
        let mut phi = PI * self.a0 * t;
        for (i, (&ak, &bk)) in self.a.iter().zip(&self.b).enumerate() {
            let k = (i + 1) as f64;
            let kw = k * w0 * t;
            let alpha = ak * self.t_dur / k;
            let beta = bk * self.t_dur / k;
            phi += alpha * kw.sin() - beta * kw.cos();
        }
        phi
    }

    /// Peak deviation of `m(t)` from `a0/2`, measured on a dense grid.
    pub fn peak_deviation(&self, grid_points: usize) -> f64 {
        let (lo, hi) = self.modulation_range(grid_points);
        (lo - self.a0 / 2.0).abs().max((hi - self.a0 / 2.0).abs())
    }

    /// Range of `m(t)` over the pulse, measured on a dense grid.
    pub fn modulation_range(&self, grid_points: usize) -> (f64, f64) {
        let n = grid_points.max(2);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let t = -self.t_dur / 2.0 + self.t_dur * i as f64 / (n - 1) as f64;
            // clamp endpoint rounding into the support
            let t = t.clamp(-self.t_dur / 2.0, self.t_dur / 2.0);
            let v = self.modulation_unchecked(t);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    fn check_domain(&self, t: f64) -> Result<(), WaveError> {
        let half = self.t_dur / 2.0;
        if t.abs() > half * (1.0 + 1e-12) || !t.is_finite() {
            return Err(WaveError::OutOfDomain { t, half_span: half });
        }
        Ok(())
    }
}

/// Carrier, bandwidth, duration, and sample-rate bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveformParams {
    /// Carrier / center frequency (Hz).
    pub fc: f64,
    /// Swept bandwidth (Hz); the modulation deviates `fc +- delta_f/2`.
    pub delta_f: f64,
    /// Pulse duration (s).
    pub t_dur: f64,
    /// Sample rate (Hz).
    pub fs: f64,
}

impl WaveformParams {
    pub fn new(fc: f64, delta_f: f64, t_dur: f64, fs: f64) -> Result<Self, WaveError> {
        if !(fc > 0.0) || !(delta_f > 0.0) || !(t_dur > 0.0) || !(fs > 0.0) {
            return Err(WaveError::InvalidParameter(format!(
                "fc, delta_f, T, fs must all be > 0 (got {fc}, {delta_f}, {t_dur}, {fs})"
            )));
        }
        Ok(Self { fc, delta_f, t_dur, fs })
    }

    /// Desk-scale parameters from quality factor and time-bandwidth product,
    /// at the default bandwidth of 100 Hz: `fc = q * delta_f`, `T = tbp / delta_f`,
    /// baseband sample rate `fs = 16 delta_f`.
    pub fn from_q_tbp(q: f64, tbp: f64) -> Result<Self, WaveError> {
        let delta_f = 100.0;
        Self::new(q * delta_f, delta_f, tbp / delta_f, 16.0 * delta_f)
    }

    /// Same parameters but with an explicit carrier; `delta_f = fc / q`.
    pub fn from_fc_q_tbp(fc: f64, q: f64, tbp: f64) -> Result<Self, WaveError> {
        let delta_f = fc / q;
        Self::new(fc, delta_f, tbp / delta_f, 16.0 * delta_f)
    }

    /// Sample rate adequate for at-carrier synthesis: `4 (fc + delta_f)`.
    pub fn with_carrier_rate(mut self) -> Self {
        self.fs = 4.0 * (self.fc + self.delta_f);
        self
    }

    /// Quality factor `fc / delta_f`.
    pub fn q(&self) -> f64 {
        self.fc / self.delta_f
    }

    /// Time-bandwidth product `T * delta_f`.
    pub fn tbp(&self) -> f64 {
        self.t_dur * self.delta_f
    }
}

/// Whether samples are at complex baseband or at the carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Baseband,
    Carrier,
}

/// A sampled complex waveform, normalized to unit discrete energy
/// `sum |s_n|^2 / fs = 1`.
#[derive(Debug, Clone)]
pub struct SampledWaveform {
    pub samples: Vec<Complex64>,
    /// Sample rate (Hz).
    pub fs: f64,
    /// Reference carrier (Hz). For baseband samples the absolute spectrum
    /// sits at `fc + f_baseband`; for carrier samples frequencies are
    /// already absolute.
    pub fc: f64,
    /// Time of the first sample relative to pulse center (s).
    pub t0_offset: f64,
    pub representation: Representation,
}

impl SampledWaveform {
    /// Time of sample `n`.
    pub fn time_at(&self, n: usize) -> f64 {
        self.t0_offset + n as f64 / self.fs
    }

    /// Discrete energy `sum |s_n|^2 / fs`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.fs
    }

    /// Duration covered by the samples.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    /// Rescale samples so the discrete energy is exactly 1.
    pub fn renormalize(&mut self) {
        let e = self.energy();
        if e > 0.0 {
            let g = 1.0 / e.sqrt();
            for s in &mut self.samples {
                *s *= g;
            }
        }
    }
}

/// Synthesize an MTSFM pulse on the uniform grid `t_n = -T/2 + n/fs`,
/// `n = 0..N-1`, `N = round(T fs)`.
///
/// Baseband samples are `exp(j phi(t_n)) / sqrt(T)`; the carrier
/// representation multiplies in `exp(j 2 pi fc t_n)`. The result is
/// renormalized to exactly unit discrete energy, which preserves the
/// constant envelope.
pub fn synthesize(
    modulation: &FourierModulation,
    params: &WaveformParams,
    representation: Representation,
) -> Result<SampledWaveform, WaveError> {
    if (modulation.t_dur - params.t_dur).abs() > 1e-9 * params.t_dur {
        return Err(WaveError::InvalidParameter(format!(
            "modulation T = {} disagrees with params T = {}",
            modulation.t_dur, params.t_dur
        )));
    }
    // Occupied band: peak baseband deviation |a0|/2 + peak(m - a0/2),
    // shifted to fc for the carrier representation. Require 4x for FM
    // sideband headroom.
    let dev = modulation.a0.abs() / 2.0 + modulation.peak_deviation(4096);
    let required = match representation {
        Representation::Baseband => 4.0 * dev.max(params.delta_f / 2.0),
        Representation::Carrier => 4.0 * (params.fc + dev.max(params.delta_f / 2.0)),
    };
    if params.fs < required {
        return Err(WaveError::NyquistViolation { fs: params.fs, required });
    }

    let n = (params.t_dur * params.fs).round() as usize;
    // exact discrete unit energy for a constant envelope: N amp^2 / fs = 1
    let amp = (params.fs / n as f64).sqrt();
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let t = -params.t_dur / 2.0 + i as f64 / params.fs;
        let mut phase = modulation.phase_unchecked(t);
        if representation == Representation::Carrier {
            phase += 2.0 * PI * params.fc * t;
        }
        samples.push(Complex64::from_polar(amp, phase));
    }
    Ok(SampledWaveform {
        samples,
        fs: params.fs,
        fc: params.fc,
        t0_offset: -params.t_dur / 2.0,
        representation,
    })
}

/// Synthesize a linear FM chirp sweeping `fc - delta_f/2` to `fc + delta_f/2`
/// over the pulse, as a unit-energy sampled waveform.
pub fn synthesize_lfm(
    params: &WaveformParams,
    representation: Representation,
) -> Result<SampledWaveform, WaveError> {
    let required = match representation {
        Representation::Baseband => 2.0 * params.delta_f,
        Representation::Carrier => 4.0 * (params.fc + params.delta_f),
    };
    if params.fs < required {
        return Err(WaveError::NyquistViolation { fs: params.fs, required });
    }
    let n = (params.t_dur * params.fs).round() as usize;
    let amp = (params.fs / n as f64).sqrt();
    let rate = params.delta_f / params.t_dur;
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let t = -params.t_dur / 2.0 + i as f64 / params.fs;
        // instantaneous frequency rate * t (baseband); phase is its integral
        let mut phase = PI * rate * t * t;
        if representation == Representation::Carrier {
            phase += 2.0 * PI * params.fc * t;
        }
        samples.push(Complex64::from_polar(amp, phase));
    }
    Ok(SampledWaveform {
        samples,
        fs: params.fs,
        fc: params.fc,
        t0_offset: -params.t_dur / 2.0,
        representation,
    })
}

/// Symmetry class of a randomly drawn modulation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// Cosine harmonics only: `m(t)` even in time.
    Even,
    /// Sine harmonics only: `m(t)` odd in time.
    Odd,
    /// Both harmonic families.
    Mixed,
}

impl Symmetry {
    pub fn as_str(&self) -> &'static str {
        match self {
            Symmetry::Even => "even",
            Symmetry::Odd => "odd",
            Symmetry::Mixed => "mixed",
        }
    }
}

/// Draw a random modulation function with `K` harmonics.
///
/// Coefficients are drawn i.i.d. uniform(-1, 1) scaled by `1/k` (the taper
/// keeps the modulation function smooth) and the unused family is zeroed
/// per the symmetry class. The set is then rescaled, and offset through
/// `a0`, so that the instantaneous frequency sweeps exactly
/// `+- target_delta_f / 2` on a dense grid: the swept band is centered
/// even when the harmonic series has an asymmetric range, which for
/// even-symmetric draws generally leaves a nonzero `a0` and hence a mean
/// frequency offset `a0/2`. Odd-symmetric draws have a symmetric range and
/// keep `a0 = 0`. Deterministic for a given seed.
pub fn random_mtsfm(
    k: usize,
    symmetry: Symmetry,
    target_delta_f: f64,
    t_dur: f64,
    seed: u64,
) -> Result<FourierModulation, WaveError> {
    if k == 0 {
        return Err(WaveError::InvalidParameter("K must be >= 1".into()));
    }
    if !(target_delta_f > 0.0) {
        return Err(WaveError::InvalidParameter("target_delta_f must be > 0".into()));
    }
    for attempt in 0..64u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, attempt));
        let mut a = vec![0.0; k];
        let mut b = vec![0.0; k];
        for i in 0..k {
            let taper = 1.0 / (i + 1) as f64;
            let da: f64 = rng.gen_range(-1.0..1.0);
            let db: f64 = rng.gen_range(-1.0..1.0);
            if symmetry != Symmetry::Odd {
                a[i] = da * taper;
            }
            if symmetry != Symmetry::Even {
                b[i] = db * taper;
            }
        }
        let mut m = FourierModulation::new(0.0, a, b, t_dur)?;
        let grid = (64 * k).max(4096);
        let (lo, hi) = m.modulation_range(grid);
        let width = hi - lo;
        if width <= f64::EPSILON * target_delta_f {
            continue; // degenerate draw, re-draw with incremented sub-seed
        }
        let scale = target_delta_f / width;
        for c in m.a.iter_mut().chain(m.b.iter_mut()) {
            *c *= scale;
        }
        if symmetry != Symmetry::Odd {
            // center the swept band: a0/2 cancels the range midpoint
            m.a0 = -scale * (hi + lo);
        }
        return Ok(m);
    }
    Err(WaveError::InvalidParameter(
        "could not draw a non-degenerate coefficient set".into(),
    ))
}

/// Per-trial seed derived from a master seed, stable across platforms and
/// schedules (splitmix64 finalizer).
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    let mut z = master_seed ^ trial_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
