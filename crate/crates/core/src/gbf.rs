//! Complex Fourier-series coefficients of the MTSFM waveform.
//!
//! The periodic part of the waveform, `exp(j(phi(t) - pi a0 t))`, expands as
//! `sum_m c_m exp(j 2 pi m t / T)`. For a single harmonic `k` the factor
//! `exp(j[alpha_k sin(k w t) - beta_k cos(k w t)])` has 1-D Bessel-series
//! coefficients `J_n(R_k) exp(j n phi_k)` placed at multiples of `k`, with
//! `R_k = sqrt(alpha_k^2 + beta_k^2)` and `phi_k = atan2(-beta_k, alpha_k)`.
//! Convolving these sequences over `k = 1..K` yields the full coefficient
//! set, equivalent to the K-dimensional generalized Bessel function of the
//! mixed type; cosine-only modulation reduces to the cylindrical form and
//! sine-only modulation to the odd form.

use rustfft::num_complex::Complex64;

use crate::bessel::{bessel_j_sequence, negligible_order};
use crate::error::WaveError;
use crate::mtsfm::FourierModulation;

/// Truncated complex Fourier-series coefficients `c_m`, `m in [-M, M]`.
#[derive(Debug, Clone)]
pub struct GbfCoefficients {
    /// Coefficients stored from `m = -M` to `m = +M`.
    pub c: Vec<Complex64>,
    /// Truncation order.
    pub m_order: usize,
    /// Pulse duration (s); harmonics sit at multiples of `1/T`.
    pub t_dur: f64,
    /// Residual frequency offset (Hz); the spectrum is centered at
    /// `fc + a0/2`.
    pub a0: f64,
}

impl GbfCoefficients {
    /// Compute coefficients at the automatic truncation order.
    ///
    /// Starts from the [`auto_truncation`] estimate and widens it if the
    /// tail-energy validation asks for more (high harmonics spread the
    /// support in steps of `k`, which the closed-form estimate can miss).
    pub fn compute(modulation: &FourierModulation) -> Result<Self, WaveError> {
        let full = convolve_harmonics(modulation);
        let half = (full.len() - 1) / 2;
        let mut m_order = auto_truncation(modulation).min(half);
        // widen until the discarded tail is negligible; 1e-18 in energy
        // keeps every discarded coefficient under ~1e-9 in magnitude
        let mut tail: f64 = tail_energy(&full, half, m_order);
        while tail > 1e-18 && m_order < half {
            m_order = (m_order + m_order / 4 + 1).min(half);
            tail = tail_energy(&full, half, m_order);
        }
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * m_order + 1];
        for (i, v) in full.iter().enumerate() {
            let m = i as i64 - half as i64;
            if m.unsigned_abs() as usize <= m_order {
                c[(m + m_order as i64) as usize] = *v;
            }
        }
        Ok(Self { c, m_order, t_dur: modulation.t_dur, a0: modulation.a0 })
    }

    /// Compute coefficients truncated to `|m| <= m_order`.
    ///
    /// Fails if the discarded tail holds more than 1e-6 of the unit
    /// coefficient energy, naming the order that would suffice.
    pub fn compute_with_order(
        modulation: &FourierModulation,
        m_order: usize,
    ) -> Result<Self, WaveError> {
        let full = convolve_harmonics(modulation);
        let half = (full.len() - 1) / 2;

        if m_order < half {
            let tail: f64 = full
                .iter()
                .enumerate()
                .filter(|(i, _)| (*i as i64 - half as i64).unsigned_abs() as usize > m_order)
                .map(|(_, v)| v.norm_sqr())
                .sum();
            if tail > 1e-6 {
                // smallest order with tail energy <= 1e-6
                let mut required = half;
                let mut acc = 0.0;
                for n in (0..=half).rev() {
                    acc += full[half + n].norm_sqr();
                    if n > 0 {
                        acc += full[half - n].norm_sqr();
                    }
                    if acc > 1e-6 {
                        required = n + 1;
                        break;
                    }
                }
                return Err(WaveError::TruncationTooSmall {
                    m: m_order,
                    required,
                    tail_energy: tail,
                });
            }
        }

        let mut c = vec![Complex64::new(0.0, 0.0); 2 * m_order + 1];
        for (i, v) in full.iter().enumerate() {
            let m = i as i64 - half as i64;
            if m.unsigned_abs() as usize <= m_order {
                c[(m + m_order as i64) as usize] = *v;
            }
        }
        Ok(Self { c, m_order, t_dur: modulation.t_dur, a0: modulation.a0 })
    }

    /// Coefficient at signed index `m` (zero outside the truncation).
    pub fn at(&self, m: i64) -> Complex64 {
        if m.unsigned_abs() as usize > self.m_order {
            Complex64::new(0.0, 0.0)
        } else {
            self.c[(m + self.m_order as i64) as usize]
        }
    }

    /// Total coefficient energy `sum |c_m|^2`; 1 up to the truncation tail.
    pub fn energy(&self) -> f64 {
        self.c.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Iterate `(m, c_m)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m0 = self.m_order as i64;
        self.c.iter().enumerate().map(move |(i, &v)| (i as i64 - m0, v))
    }
}

/// Automatic truncation order: the Bessel series for harmonic `k` is
/// negligible past `|n| ~ R_k`, so the convolution support is bounded by
/// `sum_k k (|alpha_k| + |beta_k|)` plus a safety margin proportional to
/// its square root.
pub fn auto_truncation(modulation: &FourierModulation) -> usize {
    let s: f64 = modulation
        .modulation_indices()
        .iter()
        .enumerate()
        .map(|(i, (alpha, beta))| (i + 1) as f64 * (alpha.abs() + beta.abs()))
        .sum();
    (s.ceil() as usize) + 8 + (2.0 * s.sqrt()).ceil() as usize
}

fn tail_energy(full: &[Complex64], half: usize, m_order: usize) -> f64 {
    full.iter()
        .enumerate()
        .filter(|(i, _)| (*i as i64 - half as i64).unsigned_abs() as usize > m_order)
        .map(|(_, v)| v.norm_sqr())
        .sum()
}

/// Full-support coefficient sequence from sequential discrete convolution of
/// the per-harmonic Bessel sequences. Index 0 of the result is `m = -half`.
fn convolve_harmonics(modulation: &FourierModulation) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(1.0, 0.0)]; // c_0 = 1 before any harmonic

    for (i, (alpha, beta)) in modulation.modulation_indices().iter().enumerate() {
        let k = i + 1;
        let r = alpha.hypot(*beta);
        if r < 1e-300 {
            continue;
        }
        let phase = (-beta).atan2(*alpha);
        let mut j = bessel_j_sequence(r, negligible_order(r));
        // drop orders past the point where the series is numerically zero
        while j.len() > 1 && j.last().map_or(false, |v| v.abs() < 1e-17) {
            j.pop();
        }
        let n_max = j.len() - 1;

        // d_n = J_n(R) exp(j n phase) at coefficient index n * k,
        // J_{-n} = (-1)^n J_n
        let old_half = (acc.len() - 1) / 2;
        let new_half = old_half + n_max * k;
        let mut next = vec![Complex64::new(0.0, 0.0); 2 * new_half + 1];
        for n in -(n_max as i64)..=(n_max as i64) {
            let mut jn = j[n.unsigned_abs() as usize];
            if n < 0 && n % 2 != 0 {
                jn = -jn;
            }
            if jn == 0.0 {
                continue;
            }
            let d = Complex64::from_polar(jn, n as f64 * phase);
            let shift = n * k as i64;
            for (idx, &v) in acc.iter().enumerate() {
                let m = idx as i64 - old_half as i64 + shift;
                next[(m + new_half as i64) as usize] += v * d;
            }
        }
        // trim numerically dead tails, keeping the center fixed
        let half = (next.len() - 1) / 2;
        let mut keep = 0usize;
        for (idx, v) in next.iter().enumerate() {
            if v.norm_sqr() > 1e-36 {
                keep = keep.max((idx as i64 - half as i64).unsigned_abs() as usize);
            }
        }
        if keep < half {
            next = next[(half - keep)..=(half + keep)].to_vec();
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtsfm::{random_mtsfm, Symmetry};
    use approx::assert_relative_eq;

    #[test]
    fn identity_for_zero_coefficients() {
        let g = GbfCoefficients::compute(&FourierModulation::cw(1.0)).unwrap();
        assert_relative_eq!(g.at(0).re, 1.0, epsilon = 1e-15);
        assert!(g.at(0).im.abs() < 1e-15);
        for m in 1..=g.m_order as i64 {
            assert!(g.at(m).norm() < 1e-15);
            assert!(g.at(-m).norm() < 1e-15);
        }
    }

    #[test]
    fn single_cosine_harmonic_is_1d_bessel() {
        // a1 only: c_m = J_m(alpha_1). Oracle: independent power-series J.
        let alpha = 2.404825557695773; // first zero of J_0
        let t_dur = 1.0;
        let a1 = alpha / t_dur;
        let m = FourierModulation::new(0.0, vec![a1], vec![0.0], t_dur).unwrap();
        let g = GbfCoefficients::compute(&m).unwrap();
        assert!(g.at(0).norm() < 1e-6, "c_0 should vanish at the first J_0 zero");
        for n in 0..8i64 {
            let oracle = j_power_series(n as u32, alpha);
            assert_relative_eq!(g.at(n).re, oracle, epsilon = 1e-12);
            assert!(g.at(n).im.abs() < 1e-14);
        }
    }

    // Independent J_n evaluation by its ascending power series; fine for
    // small arguments, used only as a test oracle.
    fn j_power_series(n: u32, x: f64) -> f64 {
        let half = x / 2.0;
        let mut term = half.powi(n as i32);
        for k in 1..=n {
            term /= k as f64;
        }
        let mut sum = term;
        for k in 1..40 {
            term *= -(half * half) / (k as f64 * (k + n) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn parseval_at_auto_truncation() {
        for seed in 0..8 {
            let m = random_mtsfm(12, Symmetry::Mixed, 100.0, 1.0, seed).unwrap();
            let g = GbfCoefficients::compute(&m).unwrap();
            assert_relative_eq!(g.energy(), 1.0, epsilon = 1e-6);
            // tighter at twice the automatic order
            let g2 =
                GbfCoefficients::compute_with_order(&m, 2 * auto_truncation(&m)).unwrap();
            assert_relative_eq!(g2.energy(), 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn truncation_error_names_required_order() {
        let m = random_mtsfm(8, Symmetry::Even, 100.0, 1.0, 2).unwrap();
        match GbfCoefficients::compute_with_order(&m, 3) {
            Err(WaveError::TruncationTooSmall { required, .. }) => {
                assert!(required > 3);
                assert!(GbfCoefficients::compute_with_order(&m, required).is_ok());
            }
            other => panic!("expected TruncationTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn cosine_class_coefficients_are_real() {
        let m = random_mtsfm(8, Symmetry::Even, 100.0, 1.0, 4).unwrap();
        let g = GbfCoefficients::compute(&m).unwrap();
        for (_, c) in g.iter() {
            assert!(c.im.abs() < 1e-12, "even-symmetric modulation gives real c_m");
        }
    }

    #[test]
    fn sine_class_coefficients_are_index_symmetric() {
        let m = random_mtsfm(8, Symmetry::Odd, 100.0, 1.0, 4).unwrap();
        let g = GbfCoefficients::compute(&m).unwrap();
        for n in 0..=g.m_order as i64 {
            assert!(
                (g.at(n) - g.at(-n)).norm() < 1e-12,
                "odd-symmetric modulation gives c_-m = c_m"
            );
        }
    }

    #[test]
    fn matches_fft_oracle() {
        // FFT of exp(j(phi(t) - pi a0 t)) over one period extracts the same
        // coefficients; see also the acceptance suite which runs 100 cases.
        for seed in [3u64, 17, 55] {
            let m = random_mtsfm(16, Symmetry::Mixed, 100.0, 1.0, seed).unwrap();
            let g = GbfCoefficients::compute(&m).unwrap();
            let err = crate::spectrum::testing::max_coeff_error_vs_fft(&m, &g);
            assert!(err < 1e-8, "seed {seed}: max |c_m - c_fft| = {err:.3e}");
        }
    }
}
