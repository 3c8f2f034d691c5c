//! Scalar waveform descriptors: RMS bandwidth, RMS pulse length, the
//! range-Doppler coupling factor, and the delay/Doppler estimation bounds.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::WaveError;
use crate::mtsfm::{FourierModulation, SampledWaveform};
use crate::spectrum::{spectral_centroid, Spectrum};

/// Second-moment descriptors of a waveform.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WaveformMetrics {
    /// RMS bandwidth, `4 pi^2 integral (f - f0)^2 |S|^2 df`.
    pub beta_rms_sq: f64,
    /// RMS pulse length, `4 pi^2 integral (t - t0)^2 |s|^2 dt`.
    pub tau_rms_sq: f64,
    /// Range-Doppler coupling factor.
    pub gamma: f64,
    /// Quality factor `fc / delta_f`.
    pub q: f64,
    /// Time-bandwidth product `T delta_f`.
    pub tbp: f64,
    /// Spectral centroid (Hz).
    pub f0: f64,
    /// First time moment (s).
    pub t0: f64,
}

/// Post-matched-filter SNR for the estimation bounds.
#[derive(Debug, Clone, Copy)]
pub struct CrlbInputs {
    pub snr: f64,
}

impl CrlbInputs {
    pub fn new(snr: f64) -> Result<Self, WaveError> {
        if !(snr > 0.0) {
            return Err(WaveError::InvalidParameter(format!("snr = {snr} must be > 0")));
        }
        Ok(Self { snr })
    }
}

/// Which coupling term appears in the bound denominators.
///
/// The printed form of the bounds divides by `beta^2 tau^2 - gamma`; the
/// standard uncertainty-determinant form divides by `beta^2 tau^2 - gamma^2`.
/// Both are provided; the printed form is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingTerm {
    #[default]
    GammaAsPrinted,
    GammaSquared,
}

/// RMS bandwidth about the spectral centroid (trapezoidal on the grid).
pub fn rms_bandwidth_sq(spec: &Spectrum) -> Result<f64, WaveError> {
    let f0 = spectral_centroid(spec)?;
    let total = spec.energy();
    let n = spec.f.len();
    let mut acc = 0.0;
    for i in 0..n {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let d = spec.f[i] - f0;
        acc += w * d * d * spec.psd(i);
    }
    Ok(4.0 * PI * PI * acc * spec.df / total)
}

/// RMS pulse length about the first time moment.
pub fn rms_pulselength_sq(w: &SampledWaveform) -> f64 {
    let energy = w.energy();
    let t0 = first_time_moment(w);
    let mut acc = 0.0;
    for (n, s) in w.samples.iter().enumerate() {
        let d = w.time_at(n) - t0;
        acc += d * d * s.norm_sqr();
    }
    4.0 * PI * PI * acc / w.fs / energy
}

/// First time moment `<t>` of the waveform envelope.
pub fn first_time_moment(w: &SampledWaveform) -> f64 {
    let energy = w.energy();
    let mut acc = 0.0;
    for (n, s) in w.samples.iter().enumerate() {
        acc += w.time_at(n) * s.norm_sqr();
    }
    acc / w.fs / energy
}

/// Range-Doppler coupling factor
/// `gamma = -4 pi^2 integral t m(t) |s(t)|^2 dt`
/// by composite Simpson quadrature on the synthesis grid. With the
/// rectangular envelope `|s(t)|^2 = 1/T`; any even-symmetric modulation
/// function integrates to exactly zero.
pub fn rdcf(modulation: &FourierModulation, w: &SampledWaveform) -> f64 {
    // Simpson over [-T/2, T/2] on an odd number of points tied to the grid.
    let mut n = w.samples.len();
    if n % 2 == 0 {
        n += 1;
    }
    let t_dur = modulation.t_dur;
    let h = t_dur / (n - 1) as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let t = -t_dur / 2.0 + i as f64 * h;
        let t = t.clamp(-t_dur / 2.0, t_dur / 2.0);
        let coeff = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += coeff * t * modulation.modulation_unchecked(t);
    }
    let integral = acc * h / 3.0 / t_dur; // |s|^2 = 1/T on the support
    -4.0 * PI * PI * integral
}

/// Lower bounds on the delay and Doppler estimation variances:
///
/// ```text
/// var(tau) >= ((1+SNR)/SNR^2) * tau^2 / (beta^2 tau^2 - gamma)
/// var(nu)  >= ((1+SNR)/SNR^2) * beta^2 / (beta^2 tau^2 - gamma)
/// ```
///
/// with the coupling term selected by `coupling` (see [`CouplingTerm`]).
pub fn crlb_delay_doppler(
    m: &WaveformMetrics,
    inputs: &CrlbInputs,
    coupling: CouplingTerm,
) -> Result<(f64, f64), WaveError> {
    let g = match coupling {
        CouplingTerm::GammaAsPrinted => m.gamma,
        CouplingTerm::GammaSquared => m.gamma * m.gamma,
    };
    let det = m.beta_rms_sq * m.tau_rms_sq - g;
    if !(det > 0.0) {
        return Err(WaveError::SingularCoupling { det });
    }
    let snr_factor = (1.0 + inputs.snr) / (inputs.snr * inputs.snr);
    Ok((snr_factor * m.tau_rms_sq / det, snr_factor * m.beta_rms_sq / det))
}

/// Convenience: compute the full metric set for a waveform.
pub fn waveform_metrics(
    modulation: &FourierModulation,
    w: &SampledWaveform,
    spec: &Spectrum,
    fc: f64,
    delta_f: f64,
) -> Result<WaveformMetrics, WaveError> {
    Ok(WaveformMetrics {
        beta_rms_sq: rms_bandwidth_sq(spec)?,
        tau_rms_sq: rms_pulselength_sq(w),
        gamma: rdcf(modulation, w),
        q: fc / delta_f,
        tbp: modulation.t_dur * delta_f,
        f0: spectral_centroid(spec)?,
        t0: first_time_moment(w),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtsfm::{
        random_mtsfm, synthesize, synthesize_lfm, Representation, Symmetry, WaveformParams,
    };
    use crate::spectrum::spectrum_fft;
    use approx::assert_relative_eq;
    use rustfft::num_complex::Complex64;

    fn two_tone_spectrum(fc: f64, delta_f: f64) -> Spectrum {
        // two equal narrow lines at fc +- delta_f/2 on a fine grid
        let df = 0.01;
        let n = ((2.0 * delta_f) / df) as usize + 1;
        let lo = fc - delta_f;
        let f: Vec<f64> = (0..n).map(|i| lo + df * i as f64).collect();
        let mut s = vec![Complex64::new(0.0, 0.0); n];
        let i1 = ((fc - delta_f / 2.0 - lo) / df).round() as usize;
        let i2 = ((fc + delta_f / 2.0 - lo) / df).round() as usize;
        let amp = (0.5 / df).sqrt(); // each line holds half the unit energy
        s[i1] = Complex64::new(amp, 0.0);
        s[i2] = Complex64::new(amp, 0.0);
        Spectrum::new(f, s).unwrap()
    }

    #[test]
    fn two_tone_rms_bandwidth() {
        let delta_f = 40.0;
        let spec = two_tone_spectrum(500.0, delta_f);
        let beta2 = rms_bandwidth_sq(&spec).unwrap();
        let expect = 4.0 * PI * PI * (delta_f / 2.0) * (delta_f / 2.0);
        assert_relative_eq!(beta2, expect, max_relative = 1e-9);
    }

    #[test]
    fn rms_bandwidth_is_shift_invariant() {
        let spec = two_tone_spectrum(500.0, 40.0);
        let shifted = Spectrum::new(
            spec.f.iter().map(|f| f + 123.456).collect(),
            spec.s.clone(),
        )
        .unwrap();
        assert_relative_eq!(
            rms_bandwidth_sq(&spec).unwrap(),
            rms_bandwidth_sq(&shifted).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn lfm_rms_bandwidth_matches_quadrature_oracle() {
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize_lfm(&p, Representation::Baseband).unwrap();
        let spec = spectrum_fft(&w, 4).unwrap();
        let beta2 = rms_bandwidth_sq(&spec).unwrap();
        // independent quadrature: Simpson on the same grid data
        let f0 = spectral_centroid(&spec).unwrap();
        let n = spec.f.len() - 1 - (spec.f.len() % 2); // even interval count
        let mut acc = 0.0;
        let mut total = 0.0;
        for i in 0..=n {
            let coeff = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let d = spec.f[i] - f0;
            acc += coeff * d * d * spec.psd(i);
            total += coeff * spec.psd(i);
        }
        let oracle = 4.0 * PI * PI * acc / total;
        assert_relative_eq!(beta2, oracle, max_relative = 0.005);
    }

    #[test]
    fn rect_envelope_pulse_length() {
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize_lfm(&p, Representation::Baseband).unwrap();
        let tau2 = rms_pulselength_sq(&w);
        let expect = 4.0 * PI * PI * p.t_dur * p.t_dur / 12.0;
        assert_relative_eq!(tau2, expect, max_relative = 1e-5);
    }

    #[test]
    fn pulse_length_is_time_shift_invariant() {
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let mut w = synthesize_lfm(&p, Representation::Baseband).unwrap();
        let tau2 = rms_pulselength_sq(&w);
        w.t0_offset += 17.0;
        assert_relative_eq!(tau2, rms_pulselength_sq(&w), max_relative = 1e-12);
    }

    #[test]
    fn even_symmetric_modulation_has_zero_rdcf() {
        let m = random_mtsfm(16, Symmetry::Even, 100.0, 1.0, 44).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize(&m, &p, Representation::Baseband).unwrap();
        let g = rdcf(&m, &w);
        // scale of the integrand: 4 pi^2 * T * delta_f
        let scale = 4.0 * PI * PI * p.t_dur * p.delta_f;
        assert!(g.abs() < 1e-9 * scale, "gamma = {g:.3e}");
    }

    #[test]
    fn cw_has_zero_rdcf() {
        let m = FourierModulation::cw(1.0);
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize(&m, &p, Representation::Baseband).unwrap();
        assert_eq!(rdcf(&m, &w), 0.0);
    }

    #[test]
    fn sine_modulation_rdcf_matches_analytic_value() {
        // m(t) = b1 sin(2 pi t / T):
        // gamma = -4 pi^2 (b1/T) * integral t sin(2 pi t/T) dt = -4 pi b1 T / ...
        // integral_{-T/2}^{T/2} t sin(2 pi t / T) dt = T^2 / (2 pi)
        let b1 = 50.0;
        let t_dur = 2.0;
        let m = FourierModulation::new(0.0, vec![0.0], vec![b1], t_dur).unwrap();
        let p = WaveformParams::new(500.0, 100.0, t_dur, 1600.0).unwrap();
        let w = synthesize(&m, &p, Representation::Baseband).unwrap();
        let expect = -4.0 * PI * PI * b1 * (t_dur * t_dur / (2.0 * PI)) / t_dur;
        assert_relative_eq!(rdcf(&m, &w), expect, max_relative = 1e-6);
    }

    #[test]
    fn crlb_decoupled_reduction() {
        let m = WaveformMetrics {
            beta_rms_sq: 9.0,
            tau_rms_sq: 4.0,
            gamma: 0.0,
            q: 5.0,
            tbp: 100.0,
            f0: 500.0,
            t0: 0.0,
        };
        let inputs = CrlbInputs::new(10.0).unwrap();
        let (vt, vn) = crlb_delay_doppler(&m, &inputs, CouplingTerm::GammaAsPrinted).unwrap();
        let factor = (1.0 + 10.0) / 100.0;
        assert_relative_eq!(vt, factor / 9.0, max_relative = 1e-12);
        assert_relative_eq!(vn, factor / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn crlb_vanishes_at_high_snr() {
        let m = WaveformMetrics {
            beta_rms_sq: 9.0,
            tau_rms_sq: 4.0,
            gamma: 1.0,
            q: 5.0,
            tbp: 100.0,
            f0: 500.0,
            t0: 0.0,
        };
        let lo = crlb_delay_doppler(&m, &CrlbInputs::new(1e1).unwrap(), CouplingTerm::default())
            .unwrap();
        let hi = crlb_delay_doppler(&m, &CrlbInputs::new(1e9).unwrap(), CouplingTerm::default())
            .unwrap();
        assert!(hi.0 < lo.0 * 1e-6);
        assert!(hi.1 < lo.1 * 1e-6);
    }

    #[test]
    fn crlb_rejects_singular_coupling() {
        let m = WaveformMetrics {
            beta_rms_sq: 2.0,
            tau_rms_sq: 2.0,
            gamma: 4.0,
            q: 5.0,
            tbp: 100.0,
            f0: 500.0,
            t0: 0.0,
        };
        let inputs = CrlbInputs::new(1.0).unwrap();
        assert!(matches!(
            crlb_delay_doppler(&m, &inputs, CouplingTerm::GammaAsPrinted),
            Err(WaveError::SingularCoupling { .. })
        ));
        // the squared convention differs
        assert!(matches!(
            crlb_delay_doppler(&m, &inputs, CouplingTerm::GammaSquared),
            Err(WaveError::SingularCoupling { .. })
        ));
    }

    #[test]
    fn coupling_conventions_differ_when_gamma_nonzero() {
        let m = WaveformMetrics {
            beta_rms_sq: 9.0,
            tau_rms_sq: 4.0,
            gamma: 2.0,
            q: 5.0,
            tbp: 100.0,
            f0: 500.0,
            t0: 0.0,
        };
        let inputs = CrlbInputs::new(4.0).unwrap();
        let printed =
            crlb_delay_doppler(&m, &inputs, CouplingTerm::GammaAsPrinted).unwrap();
        let squared = crlb_delay_doppler(&m, &inputs, CouplingTerm::GammaSquared).unwrap();
        // denominators: 36 - 2 = 34 (printed) vs 36 - 4 = 32 (squared)
        assert!(printed.0 < squared.0);
        assert_relative_eq!(printed.0 / squared.0, 32.0 / 34.0, max_relative = 1e-12);
    }

    #[test]
    fn crlb_agrees_across_spectrum_paths() {
        // fixed MTSFM evaluated via FFT spectrum and closed-form spectrum,
        // both restricted to the measurement band fc +- 4 delta_f (the
        // rectangular envelope's far spectral tails alias differently
        // between the two paths and are excluded from the comparison)
        let m = random_mtsfm(8, Symmetry::Odd, 100.0, 1.0, 77).unwrap();
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let w = synthesize(&m, &p, Representation::Baseband).unwrap();
        let g = crate::gbf::GbfCoefficients::compute(&m).unwrap();
        let full = spectrum_fft(&w, 4).unwrap();
        let band: Vec<usize> = (0..full.f.len())
            .filter(|&i| (full.f[i] - p.fc).abs() <= 4.0 * p.delta_f)
            .collect();
        let fft = Spectrum::new(
            band.iter().map(|&i| full.f[i]).collect(),
            band.iter().map(|&i| full.s[i]).collect(),
        )
        .unwrap();
        let cf = crate::spectrum::spectrum_closed_form_at(&g, &p, &fft.f).unwrap();
        let inputs = CrlbInputs::new(10.0).unwrap();
        let met_f = waveform_metrics(&m, &w, &fft, p.fc, p.delta_f).unwrap();
        let met_c = waveform_metrics(&m, &w, &cf, p.fc, p.delta_f).unwrap();
        let bf = crlb_delay_doppler(&met_f, &inputs, CouplingTerm::default()).unwrap();
        let bc = crlb_delay_doppler(&met_c, &inputs, CouplingTerm::default()).unwrap();
        assert_relative_eq!(bf.0, bc.0, max_relative = 0.01);
        assert_relative_eq!(bf.1, bc.1, max_relative = 0.01);
    }
}
