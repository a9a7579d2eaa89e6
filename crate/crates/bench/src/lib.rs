//! Fixtures shared by the benchmarks in `benches/`.

use std::sync::Arc;

use disperscan::{
    FrequencyGrid, MaterialsDb, Normalization, Placement, SetupConfig, SlabSpec, SpectralAmplitude,
};

/// 800 nm / 100 nm Gaussian pairs through `thickness_mm` of ZnSe in the MZ
/// arm with `tau2 = 26 ps`, on a grid of `points` samples.
pub fn znse_setup(thickness_mm: f64, points: usize) -> SetupConfig {
    let spectrum = SpectralAmplitude::make_gaussian(800e-9, 100e-9).expect("spectrum");
    let model = MaterialsDb::builtin().get("znse").expect("znse").model.clone();
    let sample = Arc::new(SlabSpec::new(model, thickness_mm * 1e-3).expect("slab"));
    let grid = FrequencyGrid::covering(&spectrum, points).expect("grid");
    SetupConfig::new(spectrum, sample, 26.0, Placement::MzArm, grid, Normalization::BaselineOne)
        .expect("setup")
}
