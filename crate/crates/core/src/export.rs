//! CSV/JSON writers for waveforms, spectra, coefficients, surfaces, and
//! profiles. Each writer takes an optional leading comment line so callers
//! can stamp outputs with provenance (version, configuration hash).

use std::io::Write;

use serde_json::json;

use crate::ambiguity::{AfCut, AfMetrics, AfSurface};
use crate::bearing::FiProfile;
use crate::channel::{beampattern, EchoModel, LineSource};
use crate::error::WaveError;
use crate::gbf::GbfCoefficients;
use crate::metrics::WaveformMetrics;
use crate::mtsfm::{FourierModulation, SampledWaveform, WaveformParams};
use crate::spectrum::Spectrum;

fn fmt(x: f64) -> String {
    format!("{x:.9e}")
}

fn comment(out: &mut impl Write, header: Option<&str>) -> Result<(), WaveError> {
    if let Some(h) = header {
        writeln!(out, "# {h}")?;
    }
    Ok(())
}

/// `t_s,re,im` rows.
pub fn write_waveform_csv(
    out: &mut impl Write,
    w: &SampledWaveform,
    header: Option<&str>,
) -> Result<(), WaveError> {
    comment(out, header)?;
    writeln!(out, "t_s,re,im")?;
    for (n, s) in w.samples.iter().enumerate() {
        writeln!(out, "{},{},{}", fmt(w.time_at(n)), fmt(s.re), fmt(s.im))?;
    }
    Ok(())
}

/// Sidecar metadata for an exported waveform.
pub fn waveform_sidecar_json(
    params: &WaveformParams,
    modulation: Option<&FourierModulation>,
    seed: Option<u64>,
    symmetry: Option<&str>,
) -> serde_json::Value {
    json!({
        "fc": params.fc,
        "delta_f": params.delta_f,
        "T": params.t_dur,
        "fs": params.fs,
        "seed": seed,
        "symmetry": symmetry,
        "coefficients": modulation.map(|m| json!({
            "a0": m.a0,
            "a": m.a,
            "b": m.b,
        })),
    })
}

/// `f_hz,re,im,psd` rows.
pub fn write_spectrum_csv(
    out: &mut impl Write,
    spec: &Spectrum,
    header: Option<&str>,
) -> Result<(), WaveError> {
    comment(out, header)?;
    writeln!(out, "f_hz,re,im,psd")?;
    for i in 0..spec.f.len() {
        writeln!(
            out,
            "{},{},{},{}",
            fmt(spec.f[i]),
            fmt(spec.s[i].re),
            fmt(spec.s[i].im),
            fmt(spec.psd(i))
        )?;
    }
    Ok(())
}

/// `m,re,im` rows.
pub fn write_coefficients_csv(
    out: &mut impl Write,
    gbf: &GbfCoefficients,
    header: Option<&str>,
) -> Result<(), WaveError> {
    comment(out, header)?;
    writeln!(out, "m,re,im")?;
    for (m, c) in gbf.iter() {
        writeln!(out, "{m},{},{}", fmt(c.re), fmt(c.im))?;
    }
    Ok(())
}

/// One JSON object per waveform.
pub fn metrics_json(m: &WaveformMetrics) -> serde_json::Value {
    json!({
        "beta_rms_sq": m.beta_rms_sq,
        "tau_rms_sq": m.tau_rms_sq,
        "gamma": m.gamma,
        "q": m.q,
        "tbp": m.tbp,
        "f0": m.f0,
        "t0": m.t0,
    })
}

/// Long-format `tau_s,doppler_hz,mag` rows; `stride` decimates the delay
/// axis for bulky surfaces (1 keeps every sample).
pub fn write_af_csv(
    out: &mut impl Write,
    af: &AfSurface,
    stride: usize,
    header: Option<&str>,
) -> Result<(), WaveError> {
    let stride = stride.max(1);
    comment(out, header)?;
    writeln!(out, "tau_s,doppler_hz,mag")?;
    for (i, &dop) in af.dopplers.iter().enumerate() {
        for (j, &tau) in af.delays.iter().enumerate().step_by(stride) {
            writeln!(out, "{},{},{}", fmt(tau), fmt(dop), fmt(af.values[i][j]))?;
        }
    }
    Ok(())
}

/// `x,mag` rows for a 1-D cut.
pub fn write_cut_csv(
    out: &mut impl Write,
    cut: &AfCut,
    header: Option<&str>,
) -> Result<(), WaveError> {
    comment(out, header)?;
    writeln!(out, "x,mag")?;
    for (x, m) in cut.x.iter().zip(&cut.mag) {
        writeln!(out, "{},{}", fmt(*x), fmt(*m))?;
    }
    Ok(())
}

/// Surface metrics as JSON; `-inf` sidelobe sentinels serialize as null.
pub fn af_metrics_json(m: &AfMetrics) -> serde_json::Value {
    json!({
        "mainlobe_width_delay": m.mainlobe_width_delay,
        "mainlobe_width_doppler": m.mainlobe_width_doppler,
        "psl_delay_db": m.psl_delay_db,
        "psl_doppler_db": m.psl_doppler_db,
        "psl_surface_db": m.psl_surface_db,
    })
}

/// `f_hz,S_re,S_im,b,h_re,h_im` rows.
pub fn write_echo_model_csv(
    out: &mut impl Write,
    model: &EchoModel,
    ls: &LineSource,
    header: Option<&str>,
) -> Result<(), WaveError> {
    comment(out, header)?;
    writeln!(out, "f_hz,S_re,S_im,b,h_re,h_im")?;
    for i in 0..model.freqs.len() {
        let b = beampattern(ls, model.freqs[i], model.theta);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt(model.freqs[i]),
            fmt(model.spectrum[i].re),
            fmt(model.spectrum[i].im),
            fmt(b),
            fmt(model.h[i].re),
            fmt(model.h[i].im)
        )?;
    }
    Ok(())
}

/// `theta_deg,fi,psi` rows.
pub fn write_fi_profile_csv(
    out: &mut impl Write,
    profile: &FiProfile,
    header: Option<&str>,
) -> Result<(), WaveError> {
    comment(out, header)?;
    writeln!(out, "theta_deg,fi,psi")?;
    for i in 0..profile.thetas.len() {
        writeln!(
            out,
            "{},{},{}",
            fmt(profile.thetas[i].to_degrees()),
            fmt(profile.fi[i]),
            fmt(profile.psi[i])
        )?;
    }
    Ok(())
}

/// Summary of an FI scan.
pub fn fi_summary_json(profile: &FiProfile) -> serde_json::Value {
    let grid_res = if profile.thetas.len() > 1 {
        (profile.thetas[1] - profile.thetas[0]).to_degrees()
    } else {
        0.0
    };
    json!({
        "theta_star_deg": profile.theta_star.to_degrees(),
        "fi_max": profile.fi_max,
        "grid_res_deg": grid_res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mtsfm::{synthesize, FourierModulation, Representation};

    #[test]
    fn waveform_csv_shape() {
        let p = WaveformParams::new(500.0, 100.0, 0.01, 1600.0).unwrap();
        let w = synthesize(&FourierModulation::cw(0.01), &p, Representation::Baseband)
            .unwrap();
        let mut buf = Vec::new();
        write_waveform_csv(&mut buf, &w, Some("meta")).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# meta"));
        assert_eq!(lines.next(), Some("t_s,re,im"));
        assert_eq!(text.lines().count(), 2 + w.samples.len());
    }

    #[test]
    fn sidecar_carries_coefficients() {
        let p = WaveformParams::new(500.0, 100.0, 1.0, 1600.0).unwrap();
        let m = FourierModulation::new(1.0, vec![2.0], vec![3.0], 1.0).unwrap();
        let v = waveform_sidecar_json(&p, Some(&m), Some(7), Some("even"));
        assert_eq!(v["seed"], 7);
        assert_eq!(v["coefficients"]["a"][0], 2.0);
        assert_eq!(v["symmetry"], "even");
    }
}
