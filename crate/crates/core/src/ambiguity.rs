//! Ambiguity surfaces and their cut/sidelobe metrics.
//!
//! The narrowband surface correlates the waveform against delayed,
//! frequency-shifted copies of itself; the broadband surface uses
//! time-scaled copies generated by band-limited resampling. Rows of a
//! surface (fixed Doppler) are independent and are evaluated in parallel
//! with a deterministic gather order.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::WaveError;
use crate::mtsfm::{Representation, SampledWaveform};
use crate::spectrum::check_uniform;

/// Narrowband (frequency shift) or broadband (time scaling) surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AfKind {
    Narrowband,
    Broadband,
}

/// `|chi|` sampled on a delay-Doppler grid.
///
/// For a narrowband surface `dopplers` holds frequency shifts in Hz; for a
/// broadband surface it holds the dimensionless scaling factors `eta`.
#[derive(Debug, Clone)]
pub struct AfSurface {
    /// Delay grid (s). For narrowband surfaces, snapped to the sample grid.
    pub delays: Vec<f64>,
    /// Doppler grid: shifts (Hz) or scaling factors (unitless), per `kind`.
    pub dopplers: Vec<f64>,
    /// `values[i_doppler][i_delay] = |chi|`.
    pub values: Vec<Vec<f64>>,
    pub kind: AfKind,
}

/// One-dimensional slice of a surface.
#[derive(Debug, Clone)]
pub struct AfCut {
    pub x: Vec<f64>,
    pub mag: Vec<f64>,
}

/// Mainlobe width and peak sidelobe levels extracted from a surface.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AfMetrics {
    /// -3 dB width of the zero-Doppler cut (s).
    pub mainlobe_width_delay: f64,
    /// -3 dB width of the zero-delay cut (Hz or eta units).
    pub mainlobe_width_doppler: f64,
    /// Peak sidelobe level of the zero-Doppler cut (dB re peak).
    pub psl_delay_db: f64,
    /// Peak sidelobe level of the zero-delay cut (dB re peak).
    pub psl_doppler_db: f64,
    /// Peak sidelobe level over the whole surface (dB re peak).
    pub psl_surface_db: f64,
}

/// Default delay grid: `[-T, T]` at sample spacing.
pub fn default_delay_grid(w: &SampledWaveform) -> Vec<f64> {
    let n = w.samples.len() as i64;
    (-n..=n).map(|m| m as f64 / w.fs).collect()
}

/// Default Doppler grid: `[-20/T, 20/T]` at `1/(8T)` spacing.
pub fn default_doppler_grid(w: &SampledWaveform) -> Vec<f64> {
    let t_dur = w.duration();
    (-160..=160).map(|k| k as f64 / (8.0 * t_dur)).collect()
}

/// Narrowband ambiguity surface
/// `chi(tau, nu) = integral s(t) s*(t + tau) exp(j 2 pi nu t) dt`
/// by discrete correlation; for each Doppler row all delays come from one
/// transform-domain pass. Delays are snapped to the sample grid and the
/// snapped values are recorded on the returned surface. Delays beyond the
/// pulse extent give 0.
pub fn naf(
    w: &SampledWaveform,
    delays: &[f64],
    dopplers: &[f64],
) -> Result<AfSurface, WaveError> {
    check_uniform(delays)?;
    check_uniform(dopplers)?;
    let n = w.samples.len();
    if n == 0 {
        return Err(WaveError::ZeroEnergy);
    }

    // snap delays to the sample grid
    let lags: Vec<i64> = delays.iter().map(|&t| (t * w.fs).round() as i64).collect();
    let snapped: Vec<f64> = lags.iter().map(|&m| m as f64 / w.fs).collect();

    let len = (2 * n).next_power_of_two();
    let planner = &mut FftPlanner::new();
    let fft = planner.plan_fft_forward(len);
    let ifft = planner.plan_fft_inverse(len);

    // reference transform conj(FFT(s)), shared across rows
    let mut sref = vec![Complex64::new(0.0, 0.0); len];
    sref[..n].copy_from_slice(&w.samples);
    fft.process(&mut sref);
    let sref_conj: Vec<Complex64> = sref.iter().map(|v| v.conj()).collect();

    let values: Vec<Vec<f64>> = dopplers
        .par_iter()
        .map(|&nu| {
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for (i, s) in w.samples.iter().enumerate() {
                let t = w.t0_offset + i as f64 / w.fs;
                buf[i] = s * Complex64::from_polar(1.0, 2.0 * PI * nu * t);
            }
            fft.process(&mut buf);
            for (v, r) in buf.iter_mut().zip(&sref_conj) {
                *v *= r;
            }
            ifft.process(&mut buf);
            // buf[p]/len = sum_n u_n conj(s_{n'}) over n - n' = p (mod len);
            // chi(m) needs n - n' = -m
            lags.iter()
                .map(|&m| {
                    if m.unsigned_abs() as usize >= n {
                        0.0
                    } else {
                        let p = (-m).rem_euclid(len as i64) as usize;
                        (buf[p] / len as f64 / w.fs).norm()
                    }
                })
                .collect()
        })
        .collect();

    Ok(AfSurface { delays: snapped, dopplers: dopplers.to_vec(), values, kind: AfKind::Narrowband })
}

/// Scaling factor `eta = (1 + rdot/c) / (1 - rdot/c)`.
pub fn doppler_scale(range_rate: f64, c: f64) -> f64 {
    (1.0 + range_rate / c) / (1.0 - range_rate / c)
}

/// Broadband ambiguity surface
/// `chi(tau, eta) = sqrt(eta) integral s(t) s*(eta (t + tau)) dt`
/// with the scaled copies generated by 16-tap windowed-sinc resampling of
/// the carrier-representation samples. The `dopplers` axis of the result
/// holds the scaling factors.
pub fn baf(
    w: &SampledWaveform,
    delays: &[f64],
    range_rates: &[f64],
    c: f64,
) -> Result<AfSurface, WaveError> {
    if w.representation != Representation::Carrier {
        return Err(WaveError::InvalidParameter(
            "broadband surface needs a carrier-representation waveform".into(),
        ));
    }
    check_uniform(delays)?;
    if range_rates.is_empty() {
        return Err(WaveError::EmptyGrid);
    }
    let etas: Vec<f64> = range_rates.iter().map(|&rr| doppler_scale(rr, c)).collect();
    for &eta in &etas {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(WaveError::InvalidParameter(format!(
                "scaling factor {eta} must be positive"
            )));
        }
    }

    let values: Vec<Vec<f64>> = etas
        .par_iter()
        .map(|&eta| {
            delays
                .iter()
                .map(|&tau| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i, s) in w.samples.iter().enumerate() {
                        let t = w.t0_offset + i as f64 / w.fs;
                        let v = interp_sinc16(w, eta * (t + tau));
                        acc += s * v.conj();
                    }
                    (acc * eta.sqrt() / w.fs).norm()
                })
                .collect()
        })
        .collect();

    Ok(AfSurface { delays: delays.to_vec(), dopplers: etas, values, kind: AfKind::Broadband })
}

/// Band-limited sample interpolation: 16-tap Hann-windowed sinc. Times
/// outside the sampled support give 0; on-grid times return the sample.
fn interp_sinc16(w: &SampledWaveform, t: f64) -> Complex64 {
    let n = w.samples.len() as i64;
    let x = (t - w.t0_offset) * w.fs;
    let nearest = x.round();
    if (x - nearest).abs() < 1e-9 {
        let k = nearest as i64;
        return if (0..n).contains(&k) {
            w.samples[k as usize]
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let k0 = x.floor() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (k0 - 7)..=(k0 + 8) {
        if !(0..n).contains(&k) {
            continue;
        }
        let d = x - k as f64;
        let kernel = (PI * d).sin() / (PI * d) * 0.5 * (1.0 + (PI * d / 8.0).cos());
        acc += w.samples[k as usize] * kernel;
    }
    acc
}

/// Zero-Doppler and zero-delay slices. Both grids must contain 0 (for a
/// broadband surface the Doppler axis must contain `eta = 1`).
pub fn af_cuts(af: &AfSurface) -> Result<(AfCut, AfCut), WaveError> {
    let zero_dop = match af.kind {
        AfKind::Narrowband => 0.0,
        AfKind::Broadband => 1.0,
    };
    let i_dop = index_of(&af.dopplers, zero_dop).ok_or(WaveError::GridMissingZero)?;
    let i_del = index_of(&af.delays, 0.0).ok_or(WaveError::GridMissingZero)?;
    let zero_doppler_cut = AfCut { x: af.delays.clone(), mag: af.values[i_dop].clone() };
    let zero_delay_cut = AfCut {
        x: af.dopplers.clone(),
        mag: af.values.iter().map(|row| row[i_del]).collect(),
    };
    Ok((zero_doppler_cut, zero_delay_cut))
}

fn index_of(grid: &[f64], target: f64) -> Option<usize> {
    let span = grid[grid.len() - 1] - grid[0];
    grid.iter().position(|&x| (x - target).abs() < 1e-9 * span.abs().max(1e-12))
}

/// -3 dB mainlobe widths (linear interpolation about the origin peak) and
/// peak sidelobe levels: the largest local maximum outside the contiguous
/// -3 dB mainlobe region, in dB re the peak, with 3-point parabolic
/// refinement on the cuts. A cut with no sidelobe reports `-inf`.
pub fn af_metrics(af: &AfSurface) -> Result<AfMetrics, WaveError> {
    let (zd, zv) = af_cuts(af)?;
    let i_del = index_of(&af.delays, 0.0).unwrap();
    let i_dop = index_of(
        &af.dopplers,
        match af.kind {
            AfKind::Narrowband => 0.0,
            AfKind::Broadband => 1.0,
        },
    )
    .unwrap();
    let peak = af.values[i_dop][i_del];
    if !(peak > 0.0) {
        return Err(WaveError::ZeroEnergy);
    }

    let (w_delay, lobe_delay) = mainlobe_width(&zd.x, &zd.mag, i_del, peak)?;
    let (w_doppler, lobe_doppler) = mainlobe_width(&zv.x, &zv.mag, i_dop, peak)?;
    let psl_delay = cut_psl(&zd.mag, lobe_delay, peak);
    let psl_doppler = cut_psl(&zv.mag, lobe_doppler, peak);
    let psl_surface = surface_psl(af, (i_dop, i_del), peak);

    Ok(AfMetrics {
        mainlobe_width_delay: w_delay,
        mainlobe_width_doppler: w_doppler,
        psl_delay_db: psl_delay,
        psl_doppler_db: psl_doppler,
        psl_surface_db: psl_surface,
    })
}

/// Width of the region around `i_peak` above `peak/sqrt(2)`, with linear
/// interpolation of the crossings. Also returns the index range of the
/// contiguous above-threshold mainlobe.
fn mainlobe_width(
    x: &[f64],
    mag: &[f64],
    i_peak: usize,
    peak: f64,
) -> Result<(f64, (usize, usize)), WaveError> {
    let level = peak / 2.0f64.sqrt();
    let mut left = i_peak;
    while left > 0 && mag[left - 1] >= level {
        left -= 1;
    }
    let mut right = i_peak;
    while right + 1 < mag.len() && mag[right + 1] >= level {
        right += 1;
    }
    if right - left + 1 < 5 {
        return Err(WaveError::InvalidParameter(format!(
            "mainlobe not resolvable: only {} grid points above -3 dB",
            right - left + 1
        )));
    }
    let x_left = if left == 0 {
        x[0]
    } else {
        // crossing between left-1 and left
        let frac = (level - mag[left - 1]) / (mag[left] - mag[left - 1]);
        x[left - 1] + frac * (x[left] - x[left - 1])
    };
    let x_right = if right + 1 == mag.len() {
        x[right]
    } else {
        let frac = (level - mag[right]) / (mag[right + 1] - mag[right]);
        x[right] + frac * (x[right + 1] - x[right])
    };
    Ok((x_right - x_left, (left, right)))
}

/// Largest local maximum outside the mainlobe index range, parabolic-refined.
fn cut_psl(mag: &[f64], lobe: (usize, usize), peak: f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for i in 1..mag.len() - 1 {
        if i >= lobe.0 && i <= lobe.1 {
            continue;
        }
        if mag[i] >= mag[i - 1] && mag[i] >= mag[i + 1] {
            let refined = parabolic_peak(mag[i - 1], mag[i], mag[i + 1]);
            best = best.max(refined);
        }
    }
    if best.is_finite() {
        20.0 * (best / peak).log10()
    } else {
        f64::NEG_INFINITY
    }
}

fn parabolic_peak(a: f64, b: f64, c: f64) -> f64 {
    let denom = a - 2.0 * b + c;
    if denom.abs() < 1e-300 {
        return b;
    }
    let delta = 0.5 * (a - c) / denom;
    if delta.abs() > 1.0 {
        return b;
    }
    b - 0.25 * (a - c) * delta
}

/// Largest 8-neighborhood local maximum outside the flood-filled -3 dB
/// region containing the origin.
fn surface_psl(af: &AfSurface, origin: (usize, usize), peak: f64) -> f64 {
    let level = peak / 2.0f64.sqrt();
    let rows = af.values.len();
    let cols = af.values[0].len();
    let mut in_lobe = vec![false; rows * cols];
    let mut stack = vec![origin];
    in_lobe[origin.0 * cols + origin.1] = true;
    while let Some((r, c)) = stack.pop() {
        let neighbors = [
            (r.wrapping_sub(1), c),
            (r + 1, c),
            (r, c.wrapping_sub(1)),
            (r, c + 1),
        ];
        for (nr, nc) in neighbors {
            if nr < rows && nc < cols && !in_lobe[nr * cols + nc] && af.values[nr][nc] >= level
            {
                in_lobe[nr * cols + nc] = true;
                stack.push((nr, nc));
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    for r in 0..rows {
        for c in 0..cols {
            if in_lobe[r * cols + c] {
                continue;
            }
            let v = af.values[r][c];
            let mut is_max = v > 0.0;
            'nb: for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                    if nr >= 0 && nr < rows as i64 && nc >= 0 && nc < cols as i64 {
                        if af.values[nr as usize][nc as usize] > v {
                            is_max = false;
                            break 'nb;
                        }
                    }
                }
            }
            if is_max {
                best = best.max(v);
            }
        }
    }
    if best.is_finite() && best > 0.0 {
        20.0 * (best / peak).log10()
    } else {
        f64::NEG_INFINITY
    }
}
