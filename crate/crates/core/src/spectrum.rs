//! Spectra: closed-form evaluation from Fourier-series coefficients, FFT and
//! DTFT paths for sampled waveforms, and the spectral centroid.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::WaveError;
use crate::gbf::GbfCoefficients;
use crate::mtsfm::{Representation, SampledWaveform, WaveformParams};

/// Complex spectrum samples on a uniform, strictly increasing absolute
/// frequency grid.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Frequency grid (Hz, absolute).
    pub f: Vec<f64>,
    /// Complex amplitudes.
    pub s: Vec<Complex64>,
    /// Grid spacing (Hz).
    pub df: f64,
}

impl Spectrum {
    pub fn new(f: Vec<f64>, s: Vec<Complex64>) -> Result<Self, WaveError> {
        if f.len() < 2 || f.len() != s.len() {
            return Err(WaveError::EmptyGrid);
        }
        let df = check_uniform(&f)?;
        Ok(Self { f, s, df })
    }

    /// Power spectral density `|S(f_i)|^2`.
    pub fn psd(&self, i: usize) -> f64 {
        self.s[i].norm_sqr()
    }

    /// Trapezoidal integral of `|S|^2` over the grid.
    pub fn energy(&self) -> f64 {
        trapz(self.f.len(), self.df, |i| self.psd(i))
    }
}

pub(crate) fn check_uniform(grid: &[f64]) -> Result<f64, WaveError> {
    if grid.len() < 2 {
        return Err(WaveError::EmptyGrid);
    }
    let df = grid[1] - grid[0];
    if !(df > 0.0) {
        return Err(WaveError::NonUniformGrid);
    }
    let span = grid[grid.len() - 1] - grid[0];
    for (i, w) in grid.windows(2).enumerate() {
        if ((w[1] - w[0]) - df).abs() > 1e-9 * span.max(df) {
            return Err(WaveError::NonUniformGrid);
        }
        let _ = i;
    }
    Ok(df)
}

fn trapz(n: usize, dx: f64, mut val: impl FnMut(usize) -> f64) -> f64 {
    let mut acc = 0.5 * (val(0) + val(n - 1));
    for i in 1..n - 1 {
        acc += val(i);
    }
    acc * dx
}

/// Closed-form spectrum
/// `S(f) = sqrt(T) sum_m c_m sinc[pi T (f - fc - a0/2 - m/T)]`
/// on a grid required to cover the full coefficient support
/// `fc + a0/2 +- M/T`, so that the result carries the waveform's energy.
pub fn spectrum_closed_form(
    gbf: &GbfCoefficients,
    params: &WaveformParams,
    f_grid: &[f64],
) -> Result<Spectrum, WaveError> {
    let df = check_uniform(f_grid)?;
    let center = params.fc + gbf.a0 / 2.0;
    let extent = gbf.m_order as f64 / gbf.t_dur;
    let (lo, hi) = (f_grid[0], f_grid[f_grid.len() - 1]);
    if lo > center - extent || hi < center + extent {
        return Err(WaveError::GridTooNarrow {
            lo,
            hi,
            need_lo: center - extent,
            need_hi: center + extent,
        });
    }
    let s = closed_form_values(gbf, center, f_grid);
    Ok(Spectrum { f: f_grid.to_vec(), s, df })
}

/// Closed-form spectrum evaluated on an arbitrary uniform grid with no
/// coverage requirement. Used for band-limited evaluation, e.g. the echo
/// model's frequency selection; such a spectrum holds only the in-band part
/// of the waveform energy.
pub fn spectrum_closed_form_at(
    gbf: &GbfCoefficients,
    params: &WaveformParams,
    f_grid: &[f64],
) -> Result<Spectrum, WaveError> {
    let df = check_uniform(f_grid)?;
    let center = params.fc + gbf.a0 / 2.0;
    let s = closed_form_values(gbf, center, f_grid);
    Ok(Spectrum { f: f_grid.to_vec(), s, df })
}

/// Evaluate `sqrt(T) sum_m c_m sinc(pi T (f - center) - pi m)` per frequency.
///
/// With `u = pi T (f - center)`, every term shares `sin(u)` up to sign:
/// `sinc(u - pi m) = (-1)^m sin(u) / (u - pi m)`, so the sum needs one sine
/// per frequency and one division per coefficient.
fn closed_form_values(gbf: &GbfCoefficients, center: f64, f_grid: &[f64]) -> Vec<Complex64> {
    let sqrt_t = gbf.t_dur.sqrt();
    f_grid
        .iter()
        .map(|&f| {
            let u = PI * gbf.t_dur * (f - center);
            let sin_u = u.sin();
            let mut acc = Complex64::new(0.0, 0.0);
            // sign of (-1)^m for the first index m = -M
            let mut sign = if gbf.m_order % 2 == 0 { 1.0 } else { -1.0 };
            for (m, c) in gbf.iter() {
                let x = u - PI * m as f64;
                let sinc = if x.abs() < 1e-6 {
                    1.0 - x * x / 6.0
                } else {
                    sign * sin_u / x
                };
                acc += c * sinc;
                sign = -sign;
            }
            acc * sqrt_t
        })
        .collect()
}

/// Discrete Fourier transform of a sampled waveform, zero-padded by
/// `zero_pad_factor`, with grid spacing `fs / (N * zero_pad_factor)`.
/// Frequencies are reported absolute using the waveform's carrier
/// bookkeeping, and amplitudes are scaled so the integrated `|S|^2` is 1.
pub fn spectrum_fft(w: &SampledWaveform, zero_pad_factor: usize) -> Result<Spectrum, WaveError> {
    if zero_pad_factor < 1 {
        return Err(WaveError::InvalidParameter("zero_pad_factor must be >= 1".into()));
    }
    let n = w.samples.len();
    if n == 0 {
        return Err(WaveError::ZeroEnergy);
    }
    let np = n * zero_pad_factor;
    let mut buf = vec![Complex64::new(0.0, 0.0); np];
    buf[..n].copy_from_slice(&w.samples);
    FftPlanner::new().plan_fft_forward(np).process(&mut buf);

    let df = w.fs / np as f64;
    let f_ref = match w.representation {
        Representation::Baseband => w.fc,
        Representation::Carrier => 0.0,
    };
    let half = (np / 2) as i64;
    let mut f = Vec::with_capacity(np);
    let mut s = Vec::with_capacity(np);
    for k in -half..(np as i64 - half) {
        let f_rel = k as f64 * df;
        let idx = k.rem_euclid(np as i64) as usize;
        // phase reference: S(f) = (1/fs) sum s_n exp(-j 2 pi f_rel t_n)
        let rot = Complex64::from_polar(1.0, -2.0 * PI * f_rel * w.t0_offset);
        f.push(f_ref + f_rel);
        s.push(buf[idx] * rot / w.fs);
    }
    // Riemann-sum Parseval normalization (exact for the DFT)
    let total: f64 = s.iter().map(|v| v.norm_sqr()).sum::<f64>() * df;
    if total <= 0.0 {
        return Err(WaveError::ZeroEnergy);
    }
    let g = 1.0 / total.sqrt();
    for v in &mut s {
        *v *= g;
    }
    Ok(Spectrum { f, s, df })
}

/// Exact DTFT of the samples at arbitrary (uniform) absolute frequencies:
/// `S(f) = (1/fs) sum_n s_n exp(-j 2 pi (f - f_ref) t_n)`.
///
/// Used where a waveform without a closed-form spectrum (e.g. the LFM
/// reference) must be evaluated on the same grid as a closed-form one.
pub fn spectrum_dtft(w: &SampledWaveform, f_grid: &[f64]) -> Result<Spectrum, WaveError> {
    let df = check_uniform(f_grid)?;
    let f_ref = match w.representation {
        Representation::Baseband => w.fc,
        Representation::Carrier => 0.0,
    };
    let s = f_grid
        .iter()
        .map(|&f| {
            let f_rel = f - f_ref;
            let step = Complex64::from_polar(1.0, -2.0 * PI * f_rel / w.fs);
            let mut rot = Complex64::from_polar(1.0, -2.0 * PI * f_rel * w.t0_offset);
            let mut acc = Complex64::new(0.0, 0.0);
            for x in &w.samples {
                acc += x * rot;
                rot *= step;
            }
            acc / w.fs
        })
        .collect();
    Ok(Spectrum { f: f_grid.to_vec(), s, df })
}

/// Spectral centroid `<f> = integral f |S|^2 df / integral |S|^2 df`
/// (trapezoidal). Callers report the deviation `delta_f = <f> - fc`.
pub fn spectral_centroid(spec: &Spectrum) -> Result<f64, WaveError> {
    let n = spec.f.len();
    let total = spec.energy();
    if !(total > 1e-300) {
        return Err(WaveError::ZeroEnergy);
    }
    let first = trapz(n, spec.df, |i| spec.f[i] * spec.psd(i));
    Ok(first / total)
}

/// Reference implementations used by tests and the acceptance suite.
///
/// These evaluate the waveform's Fourier coefficients by FFT of the sampled
/// complex exponential over one period, independently of the Bessel-series
/// convolution path.
pub mod testing {
    use super::*;
    use crate::mtsfm::FourierModulation;

    /// Periodic phase `phi(t) - pi a0 t`, evaluated from the trig series.
    fn periodic_phase(modulation: &FourierModulation, t: f64) -> f64 {
        let w0 = 2.0 * PI / modulation.t_dur;
        let mut phi = 0.0;
        for (i, (&ak, &bk)) in modulation.a.iter().zip(&modulation.b).enumerate() {
            let k = (i + 1) as f64;
            phi += (ak * modulation.t_dur / k) * (k * w0 * t).sin()
                - (bk * modulation.t_dur / k) * (k * w0 * t).cos();
        }
        phi
    }

    /// Fourier coefficients of `exp(j(phi(t) - pi a0 t))` over one period,
    /// by FFT of `n_fft` samples. Entry `k` of the result is the coefficient
    /// at signed index `k - n_fft/2`.
    pub fn fft_fourier_coefficients(
        modulation: &FourierModulation,
        n_fft: usize,
    ) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = (0..n_fft)
            .map(|i| {
                let t = modulation.t_dur * i as f64 / n_fft as f64;
                Complex64::from_polar(1.0, periodic_phase(modulation, t))
            })
            .collect();
        FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
        let half = (n_fft / 2) as i64;
        (-half..(n_fft as i64 - half))
            .map(|m| buf[m.rem_euclid(n_fft as i64) as usize] / n_fft as f64)
            .collect()
    }

    /// Max coefficient error between a computed set and the FFT extraction,
    /// over the full FFT index range (missing indices compare against zero).
    pub fn max_coeff_error_vs_fft(
        modulation: &FourierModulation,
        gbf: &GbfCoefficients,
    ) -> f64 {
        let n_fft = (8 * (gbf.m_order + 16)).next_power_of_two();
        let oracle = fft_fourier_coefficients(modulation, n_fft);
        let half = (n_fft / 2) as i64;
        oracle
            .iter()
            .enumerate()
            .map(|(i, &c)| (gbf.at(i as i64 - half) - c).norm())
            .fold(0.0, f64::max)
    }
}
