//! Experiment harness around `qrc-core`: declarative configs, reproducible
//! parallel sweeps and CSV/manifest result bundles.
//!
//! The [`experiments`] module holds one runner per experiment family
//! (phase diagram, correlation sweep, trajectory dump, capacity sweep,
//! capacity-versus-correlations, stationary observable statistics); the
//! `qrc` binary is a thin CLI over [`experiments::run_experiment`].

pub mod config;
pub mod experiments;
pub mod manifest;
pub mod pipeline;
