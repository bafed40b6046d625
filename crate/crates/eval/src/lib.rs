//! File formats, batch drivers, leaderboards, plots and the command layer
//! on top of `msd-core`.

pub mod batch;
pub mod boxplot;
pub mod commands;
pub mod manifest;
pub mod nifti;
pub mod plots;
pub mod svg;
pub mod tables;
pub mod validate;
