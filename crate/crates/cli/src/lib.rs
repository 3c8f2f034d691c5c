//! Library side of the command-line harness: experiment runners,
//! configuration, single-stage pipelines, and SVG emission. The binary in
//! `main.rs` is a thin dispatcher over these.

pub mod config;
pub mod error;
pub mod experiments;
pub mod plot;
pub mod single;

pub use config::ExperimentConfig;
pub use error::CliError;

/// Build a rayon pool honoring the `WBLAB_THREADS` cap and run `f` inside
/// it. Results are independent of the thread count by construction (trial
/// outputs are gathered by index).
pub fn with_thread_pool<T>(f: impl FnOnce() -> T + Send, cap: Option<usize>) -> T
where
    T: Send,
{
    let threads = cap.or_else(|| {
        std::env::var("WBLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok())
    });
    match threads {
        Some(n) if n >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}
