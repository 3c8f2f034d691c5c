//! The three seeded studies: the mean-frequency correlation scatter, the
//! bandwidth sweep over Q with offset compensation, and the ambiguity
//! degradation under beampattern filtering.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use wblab_core::{
    af_cuts, af_metrics, compensate_offset, default_delay_grid, default_doppler_grid,
    fi_band_grid, fi_profile, filter_waveform_renormalized, naf, random_mtsfm, rdcf,
    spectral_centroid, spectrum_closed_form_at, spectrum_dtft, synthesize, synthesize_lfm,
    theta_star_deviation, trial_seed, AfCut, FiProfile, FourierModulation, GbfCoefficients,
    LineSource, Representation, Spectrum, Symmetry, WaveformParams,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::plot;

/// One Monte Carlo trial row. Fields not applicable to an experiment stay
/// `None` and serialize as empty CSV cells.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub symmetry: Symmetry,
    pub q: f64,
    pub tbp: f64,
    pub target_deg: Option<f64>,
    pub delta_f_pct: f64,
    pub theta_star_dev_pct: f64,
    pub theta_star_dev_comp_pct: Option<f64>,
    pub fi_pct_of_max: Option<f64>,
    pub gamma: Option<f64>,
    pub psl_delay_db: Option<f64>,
    pub psl_doppler_db: Option<f64>,
}

pub const TRIALS_CSV_HEADER: &str = "trial,seed,symmetry,q,tbp,target_deg,delta_f_pct,\
theta_star_dev_pct,theta_star_dev_comp_pct,fi_pct_of_max,gamma,psl_delay_db,psl_doppler_db";

fn fmt(x: f64) -> String {
    format!("{x:.9e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

pub fn write_trials_csv(
    path: &Path,
    records: &[TrialRecord],
    provenance: &str,
) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# {provenance}")?;
    writeln!(out, "{TRIALS_CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.trial,
            r.seed,
            r.symmetry.as_str(),
            fmt(r.q),
            fmt(r.tbp),
            fmt_opt(r.target_deg),
            fmt(r.delta_f_pct),
            fmt(r.theta_star_dev_pct),
            fmt_opt(r.theta_star_dev_comp_pct),
            fmt_opt(r.fi_pct_of_max),
            fmt_opt(r.gamma),
            fmt_opt(r.psl_delay_db),
            fmt_opt(r.psl_doppler_db),
        )?;
    }
    Ok(())
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Percentile by linear interpolation on the sorted sample.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p / 100.0 * (n - 1) as f64;
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i + 1 < n {
        sorted[i] * (1.0 - frac) + sorted[i + 1] * frac
    } else {
        sorted[n - 1]
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    percentile(&v, 50.0)
}

/// Shared geometry for the bearing studies.
pub struct Bench {
    pub ls: LineSource,
    pub theta_grid: Vec<f64>,
    pub band_points: usize,
}

impl Bench {
    pub fn new(config: &ExperimentConfig) -> Result<Self, CliError> {
        let ls = LineSource::new(
            config.aperture_wavelengths * config.sound_speed / config.fc,
            config.sound_speed,
        )?;
        Ok(Self { ls, theta_grid: config.theta_grid(), band_points: config.band_points })
    }

    /// Analysis-band spectrum of an MTSFM via the closed form, on the grid
    /// centered at the nominal carrier.
    pub fn mtsfm_spectrum(
        &self,
        modulation: &FourierModulation,
        params: &WaveformParams,
    ) -> Result<Spectrum, CliError> {
        let gbf = GbfCoefficients::compute(modulation)?;
        let grid = fi_band_grid(params.fc, params.delta_f, self.band_points);
        Ok(spectrum_closed_form_at(&gbf, params, &grid)?)
    }

    /// Analysis-band spectrum of the LFM reference via exact DTFT.
    pub fn lfm_spectrum(&self, params: &WaveformParams) -> Result<Spectrum, CliError> {
        let w = synthesize_lfm(params, Representation::Baseband)?;
        let grid = fi_band_grid(params.fc, params.delta_f, self.band_points);
        Ok(spectrum_dtft(&w, &grid)?)
    }

    pub fn profile(&self, spec: &Spectrum) -> Result<FiProfile, CliError> {
        Ok(fi_profile(spec, &self.ls, &self.theta_grid)?)
    }
}

/// Correlation study: per trial, the percent deviation of the weighted mean
/// frequency and of the angle of maximum FI against the LFM reference, for
/// the cosine (even) and sine (odd) classes.
pub struct Fig2Result {
    pub records: Vec<TrialRecord>,
    pub theta_star_ref_deg: f64,
    pub pearson_even: f64,
    pub max_abs_dev_odd_pct: f64,
    pub grid_res_pct: f64,
}

pub fn run_fig2(config: &ExperimentConfig, out_dir: &Path) -> Result<Fig2Result, CliError> {
    let bench = Bench::new(config)?;
    let params = WaveformParams::new(
        config.fc,
        config.fc / config.q,
        config.tbp * config.q / config.fc,
        16.0 * config.fc / config.q,
    )?;
    let reference = bench.profile(&bench.lfm_spectrum(&params)?)?;

    let classes = [Symmetry::Even, Symmetry::Odd];
    let records: Vec<TrialRecord> = classes
        .iter()
        .flat_map(|&sym| (0..config.trials).map(move |t| (sym, t)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(sym, t)| -> Result<TrialRecord, CliError> {
            // class-distinct seed stream
            let class_tag = match sym {
                Symmetry::Even => 0x45,
                Symmetry::Odd => 0x4f,
                Symmetry::Mixed => 0x4d,
            };
            let seed = trial_seed(config.seed ^ class_tag, t as u64);
            let m = random_mtsfm(config.k, sym, params.delta_f, params.t_dur, seed)?;
            let spec = bench.mtsfm_spectrum(&m, &params)?;
            let delta_f = spectral_centroid(&spec)? - params.fc;
            let prof = bench.profile(&spec)?;
            let dev = theta_star_deviation(&prof, &reference)?;
            let w = synthesize(&m, &params, Representation::Baseband)?;
            Ok(TrialRecord {
                trial: t,
                seed,
                symmetry: sym,
                q: params.q(),
                tbp: params.tbp(),
                target_deg: None,
                delta_f_pct: 100.0 * delta_f / params.fc,
                theta_star_dev_pct: dev,
                theta_star_dev_comp_pct: None,
                fi_pct_of_max: None,
                gamma: Some(rdcf(&m, &w)),
                psl_delay_db: None,
                psl_doppler_db: None,
            })
        })
        .collect::<Result<_, _>>()?;

    let even: Vec<&TrialRecord> =
        records.iter().filter(|r| r.symmetry == Symmetry::Even).collect();
    let odd: Vec<&TrialRecord> =
        records.iter().filter(|r| r.symmetry == Symmetry::Odd).collect();
    let r_even = pearson(
        &even.iter().map(|r| r.delta_f_pct).collect::<Vec<_>>(),
        &even.iter().map(|r| r.theta_star_dev_pct).collect::<Vec<_>>(),
    );
    let max_odd = odd
        .iter()
        .map(|r| r.theta_star_dev_pct.abs())
        .fold(0.0f64, f64::max);
    let grid_res_pct =
        100.0 * (bench.theta_grid[1] - bench.theta_grid[0]) / reference.theta_star;

    let provenance = config.provenance();
    write_trials_csv(&out_dir.join("trials.csv"), &records, &provenance)?;

    let summary = json!({
        "experiment": "fig2_correlation",
        "version": wblab_core::VERSION,
        "config_hash": config.hash(),
        "config": config,
        "theta_star_ref_deg": reference.theta_star.to_degrees(),
        "grid_res_deg": (bench.theta_grid[1] - bench.theta_grid[0]).to_degrees(),
        "grid_res_pct_of_theta_star": grid_res_pct,
        "even": {
            "pearson_r": r_even,
            "max_abs_delta_f_pct": even.iter().map(|r| r.delta_f_pct.abs()).fold(0.0f64, f64::max),
            "max_abs_theta_dev_pct": even.iter().map(|r| r.theta_star_dev_pct.abs()).fold(0.0f64, f64::max),
        },
        "odd": {
            "max_abs_theta_dev_pct": max_odd,
            "max_abs_delta_f_pct": odd.iter().map(|r| r.delta_f_pct.abs()).fold(0.0f64, f64::max),
        },
    });
    std::fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;

    let chart = plot::Chart {
        title: "angle-of-max-FI deviation vs mean-frequency deviation",
        x_label: "mean frequency deviation (% of fc)",
        y_label: "theta* deviation (%)",
        series: vec![
            plot::Series {
                label: "cosine (even)".into(),
                points: even.iter().map(|r| (r.delta_f_pct, r.theta_star_dev_pct)).collect(),
                bars: None,
            },
            plot::Series {
                label: "sine (odd)".into(),
                points: odd.iter().map(|r| (r.delta_f_pct, r.theta_star_dev_pct)).collect(),
                bars: None,
            },
        ],
        lines: false,
        provenance: &provenance,
    };
    std::fs::write(out_dir.join("fig2_scatter.svg"), plot::render(&chart))?;

    Ok(Fig2Result {
        records,
        theta_star_ref_deg: reference.theta_star.to_degrees(),
        pearson_even: r_even,
        max_abs_dev_odd_pct: max_odd,
        grid_res_pct,
    })
}

/// Per-(Q, target) statistics of the bandwidth sweep.
pub struct Fig3Group {
    pub q: f64,
    pub tbp: f64,
    pub target_deg: f64,
    pub fc_tuned: f64,
    pub mean_dev: f64,
    pub median_dev: f64,
    pub p2_5: f64,
    pub p97_5: f64,
    pub mean_fi_pct: f64,
    pub median_fi_pct: f64,
    pub median_abs_dev: f64,
    pub median_abs_dev_comp: f64,
}

pub struct Fig3Result {
    pub records: Vec<TrialRecord>,
    pub groups: Vec<Fig3Group>,
    /// Pooled 95% interval width of the deviation per Q, in q_list order.
    pub ci_width_by_q: Vec<f64>,
    /// Pooled mean percent-of-max-FI per Q.
    pub mean_fi_pct_by_q: Vec<f64>,
    /// Pooled median |deviation| before and after compensation.
    pub median_abs_dev: f64,
    pub median_abs_dev_comp: f64,
}

/// Select the carrier that places the LFM reference's angle of maximum FI
/// on the target (bisection; the angle decreases monotonically with fc).
fn tune_carrier(
    bench: &Bench,
    q: f64,
    tbp: f64,
    target_rad: f64,
    fc_hint: f64,
) -> Result<(f64, FiProfile), CliError> {
    let profile_at = |fc: f64| -> Result<FiProfile, CliError> {
        let delta_f = fc / q;
        let params = WaveformParams::new(fc, delta_f, tbp / delta_f, 16.0 * delta_f)?;
        bench.profile(&bench.lfm_spectrum(&params)?)
    };
    let mut lo = fc_hint / 4.0;
    let mut hi = fc_hint * 4.0;
    let mut f_lo = profile_at(lo)?.theta_star - target_rad;
    let f_hi = profile_at(hi)?.theta_star - target_rad;
    if f_lo.signum() == f_hi.signum() {
        return Err(CliError::Usage(format!(
            "target angle {:.2} deg not reachable by carrier tuning",
            target_rad.to_degrees()
        )));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..40 {
        mid = 0.5 * (lo + hi);
        let f_mid = profile_at(mid)?.theta_star - target_rad;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((mid, profile_at(mid)?))
}

pub fn run_fig3(config: &ExperimentConfig, out_dir: &Path) -> Result<Fig3Result, CliError> {
    if config.q_list.len() != config.tbp_list.len() {
        return Err(CliError::Usage("q_list and tbp_list must have equal length".into()));
    }
    let bench = Bench::new(config)?;

    let mut records: Vec<TrialRecord> = Vec::new();
    let mut groups: Vec<Fig3Group> = Vec::new();
    for (&q, &tbp) in config.q_list.iter().zip(&config.tbp_list) {
        for &target_deg in &config.targets_deg {
            let target = target_deg.to_radians();
            // hint from the first-null scaling of the nominal carrier
            let nominal = bench.profile(&bench.lfm_spectrum(&WaveformParams::new(
                config.fc,
                config.fc / q,
                tbp * q / config.fc,
                16.0 * config.fc / q,
            )?)?)?;
            let fc_hint = config.fc * nominal.theta_star.sin() / target.sin();
            let (fc_tuned, reference) = tune_carrier(&bench, q, tbp, target, fc_hint)?;
            let delta_f = fc_tuned / q;
            let params = WaveformParams::new(fc_tuned, delta_f, tbp / delta_f, 16.0 * delta_f)?;

            let group_records: Vec<TrialRecord> = (0..config.trials)
                .into_par_iter()
                .map(|t| -> Result<TrialRecord, CliError> {
                    let seed = trial_seed(
                        config.seed ^ ((q as u64) << 32) ^ (target_deg.to_bits() >> 16),
                        t as u64,
                    );
                    let m = random_mtsfm(
                        config.k,
                        Symmetry::Even,
                        params.delta_f,
                        params.t_dur,
                        seed,
                    )?;
                    let spec = bench.mtsfm_spectrum(&m, &params)?;
                    let delta_f_meas = spectral_centroid(&spec)? - params.fc;
                    let prof = bench.profile(&spec)?;
                    let dev = theta_star_deviation(&prof, &reference)?;
                    // percent of the achievable FI when operating at the
                    // intended angle
                    let fi_pct = prof
                        .fi_at_theta(reference.theta_star)
                        .map(|v| 100.0 * v / prof.fi_max);
                    // compensated rerun
                    let comp = compensate_offset(&m, delta_f_meas);
                    let prof_c = bench.profile(&bench.mtsfm_spectrum(&comp, &params)?)?;
                    let dev_c = theta_star_deviation(&prof_c, &reference)?;
                    Ok(TrialRecord {
                        trial: t,
                        seed,
                        symmetry: Symmetry::Even,
                        q,
                        tbp,
                        target_deg: Some(target_deg),
                        delta_f_pct: 100.0 * delta_f_meas / params.fc,
                        theta_star_dev_pct: dev,
                        theta_star_dev_comp_pct: Some(dev_c),
                        fi_pct_of_max: fi_pct,
                        gamma: None,
                        psl_delay_db: None,
                        psl_doppler_db: None,
                    })
                })
                .collect::<Result<_, _>>()?;

            let devs: Vec<f64> =
                group_records.iter().map(|r| r.theta_star_dev_pct).collect();
            let mut sorted = devs.clone();
            sorted.sort_by(f64::total_cmp);
            let fi_pcts: Vec<f64> =
                group_records.iter().filter_map(|r| r.fi_pct_of_max).collect();
            let abs_dev: Vec<f64> = devs.iter().map(|v| v.abs()).collect();
            let abs_comp: Vec<f64> = group_records
                .iter()
                .filter_map(|r| r.theta_star_dev_comp_pct.map(f64::abs))
                .collect();
            groups.push(Fig3Group {
                q,
                tbp,
                target_deg,
                fc_tuned,
                mean_dev: devs.iter().sum::<f64>() / devs.len() as f64,
                median_dev: median(&devs),
                p2_5: percentile(&sorted, 2.5),
                p97_5: percentile(&sorted, 97.5),
                mean_fi_pct: fi_pcts.iter().sum::<f64>() / fi_pcts.len() as f64,
                median_fi_pct: median(&fi_pcts),
                median_abs_dev: median(&abs_dev),
                median_abs_dev_comp: median(&abs_comp),
            });
            records.extend(group_records);
        }
    }

    // pooled per-Q statistics
    let mut ci_width_by_q = Vec::new();
    let mut mean_fi_pct_by_q = Vec::new();
    for &q in &config.q_list {
        let mut devs: Vec<f64> = records
            .iter()
            .filter(|r| r.q == q)
            .map(|r| r.theta_star_dev_pct)
            .collect();
        devs.sort_by(f64::total_cmp);
        ci_width_by_q.push(percentile(&devs, 97.5) - percentile(&devs, 2.5));
        let fi: Vec<f64> = records
            .iter()
            .filter(|r| r.q == q)
            .filter_map(|r| r.fi_pct_of_max)
            .collect();
        mean_fi_pct_by_q.push(fi.iter().sum::<f64>() / fi.len() as f64);
    }
    let abs_dev: Vec<f64> =
        records.iter().map(|r| r.theta_star_dev_pct.abs()).collect();
    let abs_comp: Vec<f64> = records
        .iter()
        .filter_map(|r| r.theta_star_dev_comp_pct.map(f64::abs))
        .collect();
    let median_abs_dev = median(&abs_dev);
    let median_abs_dev_comp = median(&abs_comp);

    let provenance = config.provenance();
    write_trials_csv(&out_dir.join("trials.csv"), &records, &provenance)?;

    let group_json: Vec<serde_json::Value> = groups
        .iter()
        .map(|g| {
            json!({
                "q": g.q,
                "tbp": g.tbp,
                "target_deg": g.target_deg,
                "fc_tuned": g.fc_tuned,
                "mean_dev_pct": g.mean_dev,
                "median_dev_pct": g.median_dev,
                "p2_5_pct": g.p2_5,
                "p97_5_pct": g.p97_5,
                "mean_fi_pct_of_max": g.mean_fi_pct,
                "median_fi_pct_of_max": g.median_fi_pct,
                "median_abs_dev_pct": g.median_abs_dev,
                "median_abs_dev_comp_pct": g.median_abs_dev_comp,
            })
        })
        .collect();
    let summary = json!({
        "experiment": "fig3_qsweep",
        "version": wblab_core::VERSION,
        "config_hash": config.hash(),
        "config": config,
        "groups": group_json,
        "ci_width_by_q_pct": ci_width_by_q,
        "mean_fi_pct_by_q": mean_fi_pct_by_q,
        "median_abs_dev_pct": median_abs_dev,
        "median_abs_dev_comp_pct": median_abs_dev_comp,
    });
    std::fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;

    // error-bar chart: deviation interval per target, one series per Q
    let series: Vec<plot::Series> = config
        .q_list
        .iter()
        .enumerate()
        .map(|(qi, &q)| plot::Series {
            label: format!("Q = {q}"),
            points: groups
                .iter()
                .filter(|g| g.q == q)
                .map(|g| (g.target_deg + 0.05 * qi as f64, g.mean_dev))
                .collect(),
            bars: Some(
                groups
                    .iter()
                    .filter(|g| g.q == q)
                    .map(|g| (g.p2_5, g.p97_5))
                    .collect(),
            ),
        })
        .collect();
    let chart = plot::Chart {
        title: "theta* deviation vs targeted angle, by Q",
        x_label: "targeted angle of max FI (deg)",
        y_label: "theta* deviation (%)",
        series,
        lines: false,
        provenance: &provenance,
    };
    std::fs::write(out_dir.join("fig3_errorbars.svg"), plot::render(&chart))?;

    Ok(Fig3Result {
        records,
        groups,
        ci_width_by_q,
        mean_fi_pct_by_q,
        median_abs_dev,
        median_abs_dev_comp,
    })
}

/// Filtering study outputs.
pub struct Fig4Result {
    pub theta_star_deg: f64,
    pub clean: wblab_core::AfMetrics,
    pub filtered: wblab_core::AfMetrics,
}

pub fn run_fig4(config: &ExperimentConfig, out_dir: &Path) -> Result<Fig4Result, CliError> {
    let bench = Bench::new(config)?;
    let params = WaveformParams::new(
        config.fc,
        config.fc / config.q,
        config.tbp * config.q / config.fc,
        16.0 * config.fc / config.q,
    )?;
    let m = random_mtsfm(
        config.k,
        Symmetry::Even,
        params.delta_f,
        params.t_dur,
        trial_seed(config.fig4_waveform_seed, 0),
    )?;
    // operate at the waveform's own angle of maximum FI
    let prof = bench.profile(&bench.mtsfm_spectrum(&m, &params)?)?;
    let theta = prof.theta_star;

    let w = synthesize(&m, &params, Representation::Baseband)?;
    let filtered = filter_waveform_renormalized(&w, &bench.ls, theta)?;

    let delays = default_delay_grid(&w);
    let dopplers = default_doppler_grid(&w);
    let af_clean = naf(&w, &delays, &dopplers)?;
    let af_filt = naf(&filtered, &delays, &dopplers)?;
    let met_clean = af_metrics(&af_clean)?;
    let met_filt = af_metrics(&af_filt)?;
    let (zd_clean, zv_clean) = af_cuts(&af_clean)?;
    let (zd_filt, zv_filt) = af_cuts(&af_filt)?;

    let provenance = config.provenance();
    let header = Some(provenance.as_str());
    // keep surface exports to a few hundred delay columns
    let stride = (delays.len() / 512).max(1);
    let mut f = BufWriter::new(File::create(out_dir.join("af_clean.csv"))?);
    wblab_core::export::write_af_csv(&mut f, &af_clean, stride, header)?;
    let mut f = BufWriter::new(File::create(out_dir.join("af_filtered.csv"))?);
    wblab_core::export::write_af_csv(&mut f, &af_filt, stride, header)?;
    for (name, cut) in [
        ("cut_zero_doppler_clean.csv", &zd_clean),
        ("cut_zero_doppler_filtered.csv", &zd_filt),
        ("cut_zero_delay_clean.csv", &zv_clean),
        ("cut_zero_delay_filtered.csv", &zv_filt),
    ] {
        let mut f = BufWriter::new(File::create(out_dir.join(name))?);
        wblab_core::export::write_cut_csv(&mut f, cut, header)?;
    }

    let summary = json!({
        "experiment": "fig4_af_filtering",
        "version": wblab_core::VERSION,
        "config_hash": config.hash(),
        "config": config,
        "theta_star_deg": theta.to_degrees(),
        "af_surface_delay_stride": stride,
        "clean": wblab_core::export::af_metrics_json(&met_clean),
        "filtered": wblab_core::export::af_metrics_json(&met_filt),
        "delta": {
            "mainlobe_width_doppler_ratio":
                met_filt.mainlobe_width_doppler / met_clean.mainlobe_width_doppler,
            "mainlobe_width_delay_ratio":
                met_filt.mainlobe_width_delay / met_clean.mainlobe_width_delay,
            "psl_delay_increase_db": met_filt.psl_delay_db - met_clean.psl_delay_db,
            "psl_doppler_increase_db": met_filt.psl_doppler_db - met_clean.psl_doppler_db,
        },
    });
    std::fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;

    let to_db = |cut: &AfCut| -> Vec<(f64, f64)> {
        cut.x
            .iter()
            .zip(&cut.mag)
            .map(|(&x, &m)| (x, 20.0 * m.max(1e-6).log10()))
            .collect()
    };
    for (name, title, x_label, a, b) in [
        (
            "fig4_zero_doppler_cut.svg",
            "zero-Doppler cut, clean vs filtered",
            "delay (s)",
            &zd_clean,
            &zd_filt,
        ),
        (
            "fig4_zero_delay_cut.svg",
            "zero-delay cut, clean vs filtered",
            "Doppler (Hz)",
            &zv_clean,
            &zv_filt,
        ),
    ] {
        let chart = plot::Chart {
            title,
            x_label,
            y_label: "|chi| (dB)",
            series: vec![
                plot::Series { label: "clean".into(), points: to_db(a), bars: None },
                plot::Series { label: "filtered".into(), points: to_db(b), bars: None },
            ],
            lines: true,
            provenance: &provenance,
        };
        std::fs::write(out_dir.join(name), plot::render(&chart))?;
    }

    Ok(Fig4Result { theta_star_deg: theta.to_degrees(), clean: met_clean, filtered: met_filt })
}
