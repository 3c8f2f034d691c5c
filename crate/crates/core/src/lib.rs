//! Sonar waveform laboratory.
//!
//! Synthesizes Multi-Tone Sinusoidal Frequency Modulated (MTSFM) waveforms
//! from Fourier-series modulation functions, computes their spectra both in
//! closed form (generalized Bessel coefficients) and via FFT, evaluates
//! narrowband/broadband ambiguity surfaces and range-Doppler metrics, filters
//! waveforms through a continuous-line-source beampattern, and evaluates
//! off-axis bearing estimation precision through the Fisher information of a
//! linear echo model.
//!
//! The crate is organized around a small set of value types:
//!
//! * [`FourierModulation`] — the coefficient set `{a0, a_k, b_k}` plus
//!   duration, the design variable of every waveform here.
//! * [`SampledWaveform`] — a unit-energy complex time series.
//! * [`GbfCoefficients`] — the waveform's complex Fourier-series coefficients.
//! * [`Spectrum`] — complex amplitudes on a frequency grid.
//! * [`AfSurface`] — an ambiguity surface over delay and Doppler.
//! * [`FiProfile`] — bearing Fisher information versus look angle.
//!
//! All operations are pure functions of their inputs; values are immutable
//! after construction and safe to share across threads.

pub mod ambiguity;
pub mod bearing;
pub mod bessel;
pub mod channel;
pub mod error;
pub mod export;
pub mod gbf;
pub mod metrics;
pub mod mtsfm;
pub mod spectrum;

pub use ambiguity::{
    af_cuts, af_metrics, baf, default_delay_grid, default_doppler_grid, doppler_scale, naf,
    AfCut, AfKind, AfMetrics, AfSurface,
};
pub use bearing::{
    compensate_offset, default_theta_grid, fi_at, fi_profile, theta_star_deviation, FiProfile,
};
pub use channel::{
    beampattern, beampattern_dtheta, build_echo_model, fi_band_grid, filter_waveform,
    filter_waveform_renormalized, BandRule, EchoModel, LineSource, FI_BAND_POINTS,
    SPEED_OF_SOUND_WATER,
};
pub use error::WaveError;
pub use gbf::{auto_truncation, GbfCoefficients};
pub use metrics::{
    crlb_delay_doppler, first_time_moment, rdcf, rms_bandwidth_sq, rms_pulselength_sq,
    waveform_metrics, CouplingTerm, CrlbInputs, WaveformMetrics,
};
pub use mtsfm::{
    random_mtsfm, synthesize, synthesize_lfm, trial_seed, FourierModulation, Representation,
    SampledWaveform, Symmetry, WaveformParams,
};
pub use spectrum::{
    spectral_centroid, spectrum_closed_form, spectrum_closed_form_at, spectrum_dtft,
    spectrum_fft, Spectrum,
};

/// Library version, embedded in exported files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
