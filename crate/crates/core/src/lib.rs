//! Semi-synthetic financial return streams with a known ground truth of
//! regime changes.
//!
//! The pipeline has three stages:
//!
//! 1. [`econometrics`] fits ARMA-GARCH models to real return series, picking
//!    orders by AIC over a grid.
//! 2. [`regimegen`] schedules drift events and simulates a single
//!    path-dependent stream that moves between the fitted models, blending
//!    two of them through a sigmoidal weight during each transition.
//! 3. [`features`] turns the simulated returns into prices, synthetic bars,
//!    eighteen technical indicators and a binary direction label.
//!
//! [`analysis`] summarizes the result (descriptive statistics, histograms,
//! a velocity/volatility embedding and k-means) and [`io`] owns every
//! on-disk schema.

pub mod analysis;
pub mod econometrics;
pub mod features;
pub mod io;
pub mod regimegen;
pub mod rng;
