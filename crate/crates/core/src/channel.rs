//! Continuous-line-source projector: the frequency/angle-dependent
//! beampattern, spectral filtering of a transmit waveform at a bearing, and
//! the linear echo model built from a transmit spectrum.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::WaveError;
use crate::mtsfm::{Representation, SampledWaveform};
use crate::spectrum::{check_uniform, Spectrum};

/// Speed of acoustic propagation in water (m/s).
pub const SPEED_OF_SOUND_WATER: f64 = 1500.0;

/// A continuous line source of length `L` in a medium with sound speed `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSource {
    /// Aperture length (m).
    pub length: f64,
    /// Sound speed (m/s).
    pub c: f64,
}

impl LineSource {
    pub fn new(length: f64, c: f64) -> Result<Self, WaveError> {
        if !(length > 0.0) || !(c > 0.0) {
            return Err(WaveError::InvalidParameter(format!(
                "aperture {length} m and sound speed {c} m/s must be > 0"
            )));
        }
        Ok(Self { length, c })
    }

    /// Default aperture of ten wavelengths at the carrier, in water.
    pub fn ten_wavelengths(fc: f64) -> Result<Self, WaveError> {
        Self::new(10.0 * SPEED_OF_SOUND_WATER / fc, SPEED_OF_SOUND_WATER)
    }

    /// Half the product of wavenumber and aperture projected on the bearing:
    /// `u = (pi f L / c) sin(theta)`.
    fn u(&self, f: f64, theta: f64) -> f64 {
        PI * f * self.length / self.c * theta.sin()
    }
}

/// Beampattern `b(f, theta) = sin(u)/u`, `u = (1/2) k L sin(theta)`,
/// with the `u -> 0` limit 1.
pub fn beampattern(ls: &LineSource, f: f64, theta: f64) -> f64 {
    let u = ls.u(f, theta);
    if u.abs() < 1e-12 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Analytic bearing derivative of the beampattern:
/// `d/dtheta sinc(u) = [(u cos u - sin u) / u^2] (pi f L / c) cos(theta)`,
/// with the `u -> 0` limit 0.
pub fn beampattern_dtheta(ls: &LineSource, f: f64, theta: f64) -> f64 {
    let u = ls.u(f, theta);
    let du = PI * f * ls.length / ls.c * theta.cos();
    if u == 0.0 {
        return 0.0;
    }
    let g = if u.abs() < 1e-4 {
        // series of (u cos u - sin u)/u^2 about 0
        -u / 3.0 + u * u * u / 30.0
    } else {
        (u * u.cos() - u.sin()) / (u * u)
    };
    g * du
}

/// Multiply the waveform spectrum bin-wise by `b(f, theta)` at absolute
/// frequencies and inverse-transform. Output energy is at most the input
/// energy and is deliberately not renormalized; the gain loss is physical.
pub fn filter_waveform(
    w: &SampledWaveform,
    ls: &LineSource,
    theta: f64,
) -> Result<SampledWaveform, WaveError> {
    if theta.abs() > PI / 2.0 {
        return Err(WaveError::ThetaOutOfRange { theta });
    }
    let n = w.samples.len();
    if n == 0 {
        return Err(WaveError::ZeroEnergy);
    }
    let mut buf = w.samples.clone();
    let planner = &mut FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let f_ref = match w.representation {
        Representation::Baseband => w.fc,
        Representation::Carrier => 0.0,
    };
    let half = (n / 2) as i64;
    for (k, v) in buf.iter_mut().enumerate() {
        // FFT bin k holds baseband frequency ((k + half) mod n) - half
        let k_signed = (k as i64 + half).rem_euclid(n as i64) - half;
        let f_abs = f_ref + k_signed as f64 * w.fs / n as f64;
        *v *= beampattern(ls, f_abs, theta);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    for v in &mut buf {
        *v *= scale;
    }
    Ok(SampledWaveform {
        samples: buf,
        fs: w.fs,
        fc: w.fc,
        t0_offset: w.t0_offset,
        representation: w.representation,
    })
}

/// [`filter_waveform`] followed by renormalization to unit energy, for
/// shape comparisons of matched-filter responses.
pub fn filter_waveform_renormalized(
    w: &SampledWaveform,
    ls: &LineSource,
    theta: f64,
) -> Result<SampledWaveform, WaveError> {
    let mut out = filter_waveform(w, ls, theta)?;
    if out.energy() <= 0.0 {
        return Err(WaveError::ZeroEnergy);
    }
    out.renormalize();
    Ok(out)
}

/// Frequency selection for the echo model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandRule {
    /// Use every grid point of the supplied spectrum.
    All,
    /// Use grid points within `[lo, hi]` Hz.
    Band { lo: f64, hi: f64 },
}

/// Uniform frequency grid for the Fisher-information band selection:
/// `n` points across `center +- 0.625 delta_f` (a 25% guard band around the
/// swept bandwidth).
pub fn fi_band_grid(center: f64, delta_f: f64, n: usize) -> Vec<f64> {
    let half = 0.625 * delta_f;
    (0..n)
        .map(|i| center - half + 2.0 * half * i as f64 / (n - 1) as f64)
        .collect()
}

/// Default number of echo-model frequencies.
pub const FI_BAND_POINTS: usize = 256;

/// Linear echo model: `h_i = S_i b(f_i, theta)` on the selected band.
///
/// The amplitude `a` and per-frequency noise power `sigma2` are carried for
/// completeness at their reference values (1); the studies here factor SNR
/// out of the Fisher information.
#[derive(Debug, Clone)]
pub struct EchoModel {
    pub freqs: Vec<f64>,
    /// Transmit spectrum samples on `freqs`.
    pub spectrum: Vec<Complex64>,
    /// Model vector `h_i = S_i b(f_i, theta)`.
    pub h: Vec<Complex64>,
    /// Bearing (rad).
    pub theta: f64,
    /// Echo amplitude.
    pub amplitude: f64,
    /// Per-frequency noise power.
    pub sigma2: f64,
}

/// Build the echo model from a transmit spectrum at a bearing.
pub fn build_echo_model(
    spec: &Spectrum,
    ls: &LineSource,
    theta: f64,
    band_rule: BandRule,
) -> Result<EchoModel, WaveError> {
    if theta.abs() > PI / 2.0 {
        return Err(WaveError::ThetaOutOfRange { theta });
    }
    let selected: Vec<usize> = match band_rule {
        BandRule::All => (0..spec.f.len()).collect(),
        BandRule::Band { lo, hi } => (0..spec.f.len())
            .filter(|&i| spec.f[i] >= lo && spec.f[i] <= hi)
            .collect(),
    };
    if selected.is_empty() {
        return Err(WaveError::EmptyGrid);
    }
    let freqs: Vec<f64> = selected.iter().map(|&i| spec.f[i]).collect();
    check_uniform(&freqs)?;
    let spectrum: Vec<Complex64> = selected.iter().map(|&i| spec.s[i]).collect();
    let h = freqs
        .iter()
        .zip(&spectrum)
        .map(|(&f, &s)| s * beampattern(ls, f, theta))
        .collect();
    Ok(EchoModel { freqs, spectrum, h, theta, amplitude: 1.0, sigma2: 1.0 })
}

impl EchoModel {
    /// Demo hook: one noisy realization `y = a h + w` with complex white
    /// noise of per-frequency power `sigma2`. Never used by the studies.
    pub fn sample_echo(&self, rng: &mut impl rand::Rng) -> Vec<Complex64> {
        use rand::distributions::Distribution;
        let normal = rand::distributions::Uniform::new(0.0f64, 1.0);
        let sigma = (self.sigma2 / 2.0).sqrt();
        self.h
            .iter()
            .map(|&h| {
                // Box-Muller from two uniforms
                let u1: f64 = normal.sample(rng).max(1e-300);
                let u2: f64 = normal.sample(rng);
                let r = (-2.0 * u1.ln()).sqrt();
                let (s, c) = (2.0 * PI * u2).sin_cos();
                h * self.amplitude + Complex64::new(r * c, r * s) * sigma
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gbf::GbfCoefficients;
    use crate::mtsfm::{
        random_mtsfm, synthesize, synthesize_lfm, FourierModulation, Symmetry, WaveformParams,
    };
    use crate::spectrum::{spectrum_closed_form_at, spectrum_fft};
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    fn ls30() -> LineSource {
        LineSource::new(30.0, SPEED_OF_SOUND_WATER).unwrap()
    }

    #[test]
    fn broadside_gain_is_unity() {
        let ls = ls30();
        for &f in &[10.0, 500.0, 12_000.0] {
            assert_eq!(beampattern(&ls, f, 0.0), 1.0);
        }
    }

    #[test]
    fn first_null_location() {
        let ls = ls30();
        let f = 500.0;
        let theta = (ls.c / (f * ls.length)).asin();
        assert!(beampattern(&ls, f, theta).abs() < 1e-12);
    }

    #[test]
    fn default_aperture_is_ten_wavelengths_in_water() {
        let ls = LineSource::ten_wavelengths(500.0).unwrap();
        assert_relative_eq!(ls.c, 1500.0);
        assert_relative_eq!(ls.length, 30.0);
    }

    #[test]
    fn beampattern_is_even_and_gradient_odd() {
        let ls = ls30();
        for i in 1..40 {
            let theta = 0.3 * i as f64 / 40.0;
            assert_relative_eq!(
                beampattern(&ls, 500.0, theta),
                beampattern(&ls, 500.0, -theta),
                epsilon = 1e-15
            );
            assert_relative_eq!(
                beampattern_dtheta(&ls, 500.0, theta),
                -beampattern_dtheta(&ls, 500.0, -theta),
                epsilon = 1e-15
            );
        }
        assert_eq!(beampattern_dtheta(&ls, 500.0, 0.0), 0.0);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let ls = ls30();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let h = 1e-6;
        for _ in 0..100 {
            let f: f64 = rand::Rng::gen_range(&mut rng, 50.0..2000.0);
            let theta: f64 = rand::Rng::gen_range(&mut rng, -1.2..1.2);
            let analytic = beampattern_dtheta(&ls, f, theta);
            let fd =
                (beampattern(&ls, f, theta + h) - beampattern(&ls, f, theta - h)) / (2.0 * h);
            let scale = analytic.abs().max(1.0);
            assert!(
                (analytic - fd).abs() / scale < 1e-6,
                "f={f}, theta={theta}: {analytic} vs {fd}"
            );
        }
    }

    #[test]
    fn filtering_at_broadside_is_identity() {
        let m = random_mtsfm(8, Symmetry::Even, 100.0, 1.0, 31).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize(&m, &p, Representation::Baseband).unwrap();
        let out = filter_waveform(&w, &ls30(), 0.0).unwrap();
        let max_err = w
            .samples
            .iter()
            .zip(&out.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(max_err < 1e-12);
    }

    #[test]
    fn filtering_at_null_kills_narrowband_energy() {
        // Q = 20 waveform centered on the first null of fc
        let p = WaveformParams::new(2000.0, 100.0, 1.0, 1600.0).unwrap();
        let m = random_mtsfm(8, Symmetry::Even, 100.0, 1.0, 2).unwrap();
        let w = synthesize(&m, &p, Representation::Baseband).unwrap();
        let ls = LineSource::ten_wavelengths(p.fc).unwrap();
        let theta_null = (ls.c / (p.fc * ls.length)).asin();
        let out = filter_waveform(&w, &ls, theta_null).unwrap();
        assert!(
            out.energy() < 0.1 * w.energy(),
            "energy {} vs input {}",
            out.energy(),
            w.energy()
        );
    }

    #[test]
    fn off_axis_filtering_introduces_am_ripple() {
        let m = random_mtsfm(16, Symmetry::Even, 100.0, 1.0, 7).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize(&m, &p, Representation::Baseband).unwrap();
        let out = filter_waveform(&w, &ls30(), 0.06).unwrap();
        let envelope: Vec<f64> = out.samples.iter().map(|s| s.norm()).collect();
        let max = envelope.iter().fold(0.0f64, |a, &b| a.max(b));
        let min = envelope.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        assert!(max / min > 1.0 + 1e-6, "ratio {}", max / min);
        assert!(out.energy() <= w.energy() + 1e-12);
    }

    #[test]
    fn filtering_commutes_with_spectrum_measurement() {
        let m = random_mtsfm(8, Symmetry::Odd, 100.0, 1.0, 16).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize(&m, &p, Representation::Baseband).unwrap();
        let ls = ls30();
        let theta = 0.05;
        let filtered = filter_waveform(&w, &ls, theta).unwrap();
        let spec_after = spectrum_fft(&filtered, 1).unwrap();
        let spec_before = spectrum_fft(&w, 1).unwrap();
        // compare unnormalized magnitudes: measure-then-multiply
        let e_f = filtered.energy().sqrt();
        for i in 0..spec_before.f.len() {
            let expect = spec_before.s[i].norm() * beampattern(&ls, spec_before.f[i], theta);
            let got = spec_after.s[i].norm() * e_f;
            assert!(
                (got - expect).abs() < 1e-9,
                "bin {i}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn echo_model_at_broadside_is_the_spectrum() {
        let m = random_mtsfm(8, Symmetry::Even, 100.0, 1.0, 12).unwrap();
        let g = GbfCoefficients::compute(&m).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let grid = fi_band_grid(p.fc, p.delta_f, FI_BAND_POINTS);
        let spec = spectrum_closed_form_at(&g, &p, &grid).unwrap();
        let model = build_echo_model(&spec, &ls30(), 0.0, BandRule::All).unwrap();
        for (h, s) in model.h.iter().zip(&model.spectrum) {
            assert!((h - s).norm() < 1e-15);
        }
    }

    #[test]
    fn echo_model_band_count_for_lfm() {
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize_lfm(&p, Representation::Baseband).unwrap();
        let oversample = 4;
        let spec = spectrum_fft(&w, oversample).unwrap();
        let rule = BandRule::Band { lo: p.fc - p.delta_f / 2.0, hi: p.fc + p.delta_f / 2.0 };
        let model = build_echo_model(&spec, &ls30(), 0.01, rule).unwrap();
        let expect = (p.t_dur * p.delta_f * oversample as f64) as usize;
        let n = model.freqs.len();
        assert!(
            n >= expect && n <= expect + 2,
            "selected {n} points, expectation ~{expect}"
        );
    }

    #[test]
    fn echo_model_is_linear_in_the_spectrum() {
        let m = FourierModulation::cw(1.0);
        let g = GbfCoefficients::compute(&m).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let grid = fi_band_grid(p.fc, p.delta_f, 64);
        let spec = spectrum_closed_form_at(&g, &p, &grid).unwrap();
        let mut doubled = spec.clone();
        for v in &mut doubled.s {
            *v *= 2.0;
        }
        let ls = ls30();
        let m1 = build_echo_model(&spec, &ls, 0.03, BandRule::All).unwrap();
        let m2 = build_echo_model(&doubled, &ls, 0.03, BandRule::All).unwrap();
        for (a, b) in m1.h.iter().zip(&m2.h) {
            assert!((b - a * 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn empty_band_selection_is_an_error() {
        let m = FourierModulation::cw(1.0);
        let g = GbfCoefficients::compute(&m).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let grid = fi_band_grid(p.fc, p.delta_f, 64);
        let spec = spectrum_closed_form_at(&g, &p, &grid).unwrap();
        let rule = BandRule::Band { lo: 10_000.0, hi: 11_000.0 };
        assert!(matches!(
            build_echo_model(&spec, &ls30(), 0.0, rule),
            Err(WaveError::EmptyGrid)
        ));
    }

    #[test]
    fn echo_sampling_hook_runs() {
        let m = FourierModulation::cw(1.0);
        let g = GbfCoefficients::compute(&m).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let grid = fi_band_grid(p.fc, p.delta_f, 32);
        let spec = spectrum_closed_form_at(&g, &p, &grid).unwrap();
        let model = build_echo_model(&spec, &ls30(), 0.02, BandRule::All).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let y = model.sample_echo(&mut rng);
        assert_eq!(y.len(), model.h.len());
        assert!(y.iter().all(|v| v.re.is_finite() && v.im.is_finite()));
    }
}
