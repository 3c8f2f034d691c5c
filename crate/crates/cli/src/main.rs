use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wblab::config::{ensure_out_dir, ExperimentConfig};
use wblab::error::CliError;
use wblab::single::{SpectrumMethod, WaveArgs};
use wblab::{experiments, single, with_thread_pool};

/// Waveform laboratory: MTSFM synthesis, spectra, ambiguity surfaces, and
/// off-axis bearing Fisher information, with seeded batch studies.
#[derive(Parser)]
#[command(name = "wblab", version, about)]
struct Cli {
    /// Flat JSON config file; any subset of keys, flags override.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out", global = true)]
    out: PathBuf,
    /// Restore publication-scale trial counts (1000 or 2000 per group).
    #[arg(long, global = true)]
    paper_scale: bool,
    /// Cap worker threads (also via WBLAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize one waveform to CSV with a JSON sidecar.
    Synth {
        #[command(flatten)]
        wave: WaveArgs,
    },
    /// Spectrum of one waveform (closed form or FFT), plus coefficients.
    Spectrum {
        #[command(flatten)]
        wave: WaveArgs,
        #[arg(long, value_enum, default_value = "gbf")]
        method: SpectrumMethod,
        /// Zero-padding factor for the FFT method.
        #[arg(long, default_value_t = 4)]
        zero_pad: usize,
    },
    /// RMS bandwidth, pulse length, coupling factor, and moments.
    Metrics {
        #[command(flatten)]
        wave: WaveArgs,
    },
    /// Ambiguity surface, cuts, and mainlobe/sidelobe metrics.
    Af {
        #[command(flatten)]
        wave: WaveArgs,
    },
    /// Bearing Fisher-information profile and angle of maximum FI.
    Fi {
        #[command(flatten)]
        wave: WaveArgs,
    },
    /// Correlation study: mean-frequency vs angle-of-max-FI deviation.
    Fig2,
    /// Bandwidth sweep over Q with offset compensation.
    Fig3,
    /// Ambiguity degradation under beampattern filtering.
    Fig4,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut config = ExperimentConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if cli.paper_scale {
        config.apply_paper_scale(matches!(cli.command, Command::Fig3));
    }
    let out_dir = ensure_out_dir(&cli.out)?;
    let provenance = config.provenance();
    std::fs::write(
        out_dir.join("config.json"),
        serde_json::to_string_pretty(&serde_json::json!({
            "config": config,
            "config_hash": config.hash(),
            "version": wblab_core::VERSION,
        }))?,
    )?;

    let summary = with_thread_pool(
        || -> Result<serde_json::Value, CliError> {
            match &cli.command {
                Command::Synth { wave } => {
                    single::run_synth(wave, config.seed, &out_dir, &provenance)
                }
                Command::Spectrum { wave, method, zero_pad } => single::run_spectrum(
                    wave,
                    *method,
                    *zero_pad,
                    config.seed,
                    &out_dir,
                    &provenance,
                ),
                Command::Metrics { wave } => single::run_metrics(wave, config.seed, &out_dir),
                Command::Af { wave } => {
                    single::run_af(wave, config.seed, &out_dir, &provenance)
                }
                Command::Fi { wave } => {
                    single::run_fi(wave, config.seed, &config, &out_dir, &provenance)
                }
                Command::Fig2 => {
                    let r = experiments::run_fig2(&config, &out_dir)?;
                    Ok(serde_json::json!({
                        "experiment": "fig2_correlation",
                        "theta_star_ref_deg": r.theta_star_ref_deg,
                        "pearson_even": r.pearson_even,
                        "max_abs_dev_odd_pct": r.max_abs_dev_odd_pct,
                        "trials": r.records.len(),
                    }))
                }
                Command::Fig3 => {
                    let r = experiments::run_fig3(&config, &out_dir)?;
                    Ok(serde_json::json!({
                        "experiment": "fig3_qsweep",
                        "ci_width_by_q_pct": r.ci_width_by_q,
                        "mean_fi_pct_by_q": r.mean_fi_pct_by_q,
                        "median_abs_dev_pct": r.median_abs_dev,
                        "median_abs_dev_comp_pct": r.median_abs_dev_comp,
                        "trials": r.records.len(),
                    }))
                }
                Command::Fig4 => {
                    let r = experiments::run_fig4(&config, &out_dir)?;
                    Ok(serde_json::json!({
                        "experiment": "fig4_af_filtering",
                        "theta_star_deg": r.theta_star_deg,
                        "clean": wblab_core::export::af_metrics_json(&r.clean),
                        "filtered": wblab_core::export::af_metrics_json(&r.filtered),
                    }))
                }
            }
        },
        cli.threads,
    )?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wblab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
