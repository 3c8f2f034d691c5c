//! Single-stage pipelines behind the `synth`, `spectrum`, `metrics`, `af`,
//! and `fi` subcommands: run one analysis on one waveform, write CSVs, and
//! return the summary printed to standard output.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde_json::json;

use wblab_core::export::{
    af_metrics_json, fi_summary_json, metrics_json, waveform_sidecar_json, write_af_csv,
    write_coefficients_csv, write_cut_csv, write_fi_profile_csv, write_spectrum_csv,
    write_waveform_csv,
};
use wblab_core::{
    af_cuts, af_metrics, default_delay_grid, default_doppler_grid, fi_band_grid, fi_profile,
    naf, random_mtsfm, rdcf, rms_bandwidth_sq, rms_pulselength_sq, spectral_centroid,
    spectrum_closed_form_at, spectrum_dtft, spectrum_fft, synthesize, synthesize_lfm,
    FourierModulation, GbfCoefficients, LineSource, Representation, SampledWaveform, Spectrum,
    Symmetry, WaveformParams, FI_BAND_POINTS,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Which waveform a single-stage subcommand operates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WaveKind {
    Mtsfm,
    Lfm,
    Cw,
}

/// Waveform selection shared by the single-stage subcommands.
#[derive(Debug, Clone, clap::Args)]
pub struct WaveArgs {
    /// Waveform family.
    #[arg(long, value_enum, default_value = "mtsfm")]
    pub waveform: WaveKind,
    /// Symmetry class of the random draw.
    #[arg(long, value_enum, default_value = "even")]
    pub symmetry: SymArg,
    /// Harmonic count of the random draw.
    #[arg(long, default_value_t = 32)]
    pub k: usize,
    /// Carrier frequency (Hz).
    #[arg(long, default_value_t = 500.0)]
    pub fc: f64,
    /// Swept bandwidth (Hz); overridden by --q when given.
    #[arg(long, default_value_t = 100.0)]
    pub delta_f: f64,
    /// Pulse duration (s); overridden by --tbp when given.
    #[arg(long, default_value_t = 1.0)]
    pub t_dur: f64,
    /// Quality factor; sets delta_f = fc / q.
    #[arg(long)]
    pub q: Option<f64>,
    /// Time-bandwidth product; sets t_dur = tbp / delta_f.
    #[arg(long)]
    pub tbp: Option<f64>,
    /// Sample rate (Hz); default 16 delta_f at baseband, 4 (fc + delta_f)
    /// at carrier.
    #[arg(long)]
    pub fs: Option<f64>,
    /// Complex baseband or at-carrier samples.
    #[arg(long, value_enum, default_value = "baseband")]
    pub representation: ReprArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SymArg {
    Even,
    Odd,
    Mixed,
}

impl From<SymArg> for Symmetry {
    fn from(s: SymArg) -> Symmetry {
        match s {
            SymArg::Even => Symmetry::Even,
            SymArg::Odd => Symmetry::Odd,
            SymArg::Mixed => Symmetry::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReprArg {
    Baseband,
    Carrier,
}

impl From<ReprArg> for Representation {
    fn from(r: ReprArg) -> Representation {
        match r {
            ReprArg::Baseband => Representation::Baseband,
            ReprArg::Carrier => Representation::Carrier,
        }
    }
}

/// A resolved waveform: parameters, optional modulation coefficients, and
/// samples.
pub struct ResolvedWave {
    pub params: WaveformParams,
    pub modulation: Option<FourierModulation>,
    pub wave: SampledWaveform,
    pub seed: Option<u64>,
    pub symmetry: Option<Symmetry>,
}

pub fn resolve_wave(args: &WaveArgs, seed: u64) -> Result<ResolvedWave, CliError> {
    let delta_f = match args.q {
        Some(q) if q > 0.0 => args.fc / q,
        Some(q) => return Err(CliError::Usage(format!("--q must be positive, got {q}"))),
        None => args.delta_f,
    };
    let t_dur = match args.tbp {
        Some(tbp) if tbp > 0.0 => tbp / delta_f,
        Some(tbp) => return Err(CliError::Usage(format!("--tbp must be positive, got {tbp}"))),
        None => args.t_dur,
    };
    let representation = Representation::from(args.representation);
    let fs = args.fs.unwrap_or(match representation {
        Representation::Baseband => 16.0 * delta_f,
        Representation::Carrier => 4.0 * (args.fc + delta_f),
    });
    let params = WaveformParams::new(args.fc, delta_f, t_dur, fs)?;
    match args.waveform {
        WaveKind::Lfm => {
            let wave = synthesize_lfm(&params, representation)?;
            Ok(ResolvedWave { params, modulation: None, wave, seed: None, symmetry: None })
        }
        WaveKind::Cw => {
            let m = FourierModulation::cw(t_dur);
            let wave = synthesize(&m, &params, representation)?;
            Ok(ResolvedWave {
                params,
                modulation: Some(m),
                wave,
                seed: None,
                symmetry: None,
            })
        }
        WaveKind::Mtsfm => {
            let sym = Symmetry::from(args.symmetry);
            let m = random_mtsfm(args.k, sym, delta_f, t_dur, seed)?;
            let wave = synthesize(&m, &params, representation)?;
            Ok(ResolvedWave {
                params,
                modulation: Some(m),
                wave,
                seed: Some(seed),
                symmetry: Some(sym),
            })
        }
    }
}

pub fn run_synth(
    args: &WaveArgs,
    seed: u64,
    out_dir: &Path,
    provenance: &str,
) -> Result<serde_json::Value, CliError> {
    let r = resolve_wave(args, seed)?;
    let mut f = BufWriter::new(File::create(out_dir.join("waveform.csv"))?);
    write_waveform_csv(&mut f, &r.wave, Some(provenance))?;
    let sidecar = waveform_sidecar_json(
        &r.params,
        r.modulation.as_ref(),
        r.seed,
        r.symmetry.map(|s| s.as_str()),
    );
    std::fs::write(
        out_dir.join("waveform_meta.json"),
        serde_json::to_string_pretty(&sidecar)?,
    )?;
    Ok(json!({
        "n_samples": r.wave.samples.len(),
        "fs": r.wave.fs,
        "fc": r.wave.fc,
        "energy": r.wave.energy(),
        "q": r.params.q(),
        "tbp": r.params.tbp(),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SpectrumMethod {
    /// Closed form from the Bessel-series coefficients.
    Gbf,
    /// Zero-padded FFT of the samples.
    Fft,
}

pub fn run_spectrum(
    args: &WaveArgs,
    method: SpectrumMethod,
    zero_pad: usize,
    seed: u64,
    out_dir: &Path,
    provenance: &str,
) -> Result<serde_json::Value, CliError> {
    let r = resolve_wave(args, seed)?;
    let (spec, coeff_info) = match method {
        SpectrumMethod::Fft => (spectrum_fft(&r.wave, zero_pad)?, serde_json::Value::Null),
        SpectrumMethod::Gbf => {
            let m = r.modulation.as_ref().ok_or_else(|| {
                CliError::Usage("closed-form spectrum needs mtsfm or cw".into())
            })?;
            let gbf = GbfCoefficients::compute(m)?;
            let mut f = BufWriter::new(File::create(out_dir.join("coefficients.csv"))?);
            write_coefficients_csv(&mut f, &gbf, Some(provenance))?;
            let center = r.params.fc + gbf.a0 / 2.0;
            let half = gbf.m_order as f64 / gbf.t_dur + 8.0 / gbf.t_dur;
            let df = 1.0 / (8.0 * gbf.t_dur);
            let n = (2.0 * half / df).ceil() as usize + 1;
            let grid: Vec<f64> = (0..n).map(|i| center - half + i as f64 * df).collect();
            let spec = wblab_core::spectrum_closed_form(&gbf, &r.params, &grid)?;
            let info = json!({
                "m_order": gbf.m_order,
                "coefficient_energy": gbf.energy(),
            });
            (spec, info)
        }
    };
    let mut f = BufWriter::new(File::create(out_dir.join("spectrum.csv"))?);
    write_spectrum_csv(&mut f, &spec, Some(provenance))?;
    let centroid = spectral_centroid(&spec)?;
    Ok(json!({
        "points": spec.f.len(),
        "df": spec.df,
        "centroid_hz": centroid,
        "delta_f_hz": centroid - r.params.fc,
        "energy": spec.energy(),
        "coefficients": coeff_info,
    }))
}

pub fn run_metrics(
    args: &WaveArgs,
    seed: u64,
    out_dir: &Path,
) -> Result<serde_json::Value, CliError> {
    let r = resolve_wave(args, seed)?;
    let spec = spectrum_fft(&r.wave, 4)?;
    let gamma = match (&r.modulation, args.waveform) {
        (Some(m), _) => rdcf(m, &r.wave),
        // linear sweep: -4 pi^2 (delta_f/T) <t^2> / T = -pi^2 delta_f T / 3
        (None, WaveKind::Lfm) => {
            -std::f64::consts::PI.powi(2) * r.params.delta_f * r.params.t_dur / 3.0
        }
        (None, _) => unreachable!("only the LFM lacks explicit coefficients"),
    };
    let m = wblab_core::WaveformMetrics {
        beta_rms_sq: rms_bandwidth_sq(&spec)?,
        tau_rms_sq: rms_pulselength_sq(&r.wave),
        gamma,
        q: r.params.q(),
        tbp: r.params.tbp(),
        f0: spectral_centroid(&spec)?,
        t0: wblab_core::first_time_moment(&r.wave),
    };
    let value = metrics_json(&m);
    std::fs::write(out_dir.join("metrics.json"), serde_json::to_string_pretty(&value)?)?;
    Ok(value)
}

pub fn run_af(
    args: &WaveArgs,
    seed: u64,
    out_dir: &Path,
    provenance: &str,
) -> Result<serde_json::Value, CliError> {
    let r = resolve_wave(args, seed)?;
    let delays = default_delay_grid(&r.wave);
    let dopplers = default_doppler_grid(&r.wave);
    let af = naf(&r.wave, &delays, &dopplers)?;
    let stride = (delays.len() / 512).max(1);
    let mut f = BufWriter::new(File::create(out_dir.join("af.csv"))?);
    write_af_csv(&mut f, &af, stride, Some(provenance))?;
    let (zd, zv) = af_cuts(&af)?;
    let mut f = BufWriter::new(File::create(out_dir.join("cut_zero_doppler.csv"))?);
    write_cut_csv(&mut f, &zd, Some(provenance))?;
    let mut f = BufWriter::new(File::create(out_dir.join("cut_zero_delay.csv"))?);
    write_cut_csv(&mut f, &zv, Some(provenance))?;
    let metrics = af_metrics(&af)?;
    let value = af_metrics_json(&metrics);
    std::fs::write(out_dir.join("af_metrics.json"), serde_json::to_string_pretty(&value)?)?;
    Ok(json!({
        "delays": af.delays.len(),
        "dopplers": af.dopplers.len(),
        "surface_delay_stride": stride,
        "metrics": value,
    }))
}

pub fn run_fi(
    args: &WaveArgs,
    seed: u64,
    config: &ExperimentConfig,
    out_dir: &Path,
    provenance: &str,
) -> Result<serde_json::Value, CliError> {
    let r = resolve_wave(args, seed)?;
    let ls = LineSource::new(
        config.aperture_wavelengths * config.sound_speed / r.params.fc,
        config.sound_speed,
    )?;
    let grid = fi_band_grid(r.params.fc, r.params.delta_f, FI_BAND_POINTS);
    let spec: Spectrum = match &r.modulation {
        Some(m) => {
            let gbf = GbfCoefficients::compute(m)?;
            spectrum_closed_form_at(&gbf, &r.params, &grid)?
        }
        None => spectrum_dtft(&r.wave, &grid)?,
    };
    let profile = fi_profile(&spec, &ls, &config.theta_grid())?;
    let mut f = BufWriter::new(File::create(out_dir.join("fi_profile.csv"))?);
    write_fi_profile_csv(&mut f, &profile, Some(provenance))?;
    // echo model at the angle of maximum FI
    let model = wblab_core::build_echo_model(
        &spec,
        &ls,
        profile.theta_star,
        wblab_core::BandRule::All,
    )?;
    let mut f = BufWriter::new(File::create(out_dir.join("echo_model.csv"))?);
    wblab_core::export::write_echo_model_csv(&mut f, &model, &ls, Some(provenance))?;
    let value = fi_summary_json(&profile);
    std::fs::write(out_dir.join("fi_summary.json"), serde_json::to_string_pretty(&value)?)?;
    Ok(value)
}
