//! Two-photon interferogram of a Hong-Ou-Mandel interferometer cascaded into
//! a Mach-Zehnder interferometer, with a dispersive sample in the MZ arm.
//!
//! Frequencies are angular, in rad/ps; delays are in ps. Conversions from SI
//! live in [`units`].

pub mod dispersion;
pub mod error;
pub mod interferogram;
pub mod oracle;
pub mod spectrum;
pub mod units;

pub use dispersion::{
    even_odd_split, fit_taylor, MaterialsDb, PhaseFunction, SellmeierModel, SharedPhase, SlabSpec,
    TaylorPhase,
};
pub use error::{Error, Result};
pub use interferogram::{
    classify_regime, coincidence_rate, decompose, locate_features, scan, scan_adaptive,
    Decomposition, Feature, Interferogram, Normalization, Placement, Regime, SetupConfig,
};
pub use spectrum::{FrequencyGrid, SpectralAmplitude, SpectrumKind};
