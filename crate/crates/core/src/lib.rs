//! Simulator and exact calculator for two-site polymer-chain assembly under
//! one-way control.
//!
//! A CPU broadcasts one control signal per step to two remote assembly
//! sites and never waits for replies. Each site attaches a monoblock of a
//! locally observed random type (a or b) with a shift sign chosen by the
//! controller; when the two chains are superimposed, a position glues well
//! exactly when the shifts agree, except for the asymmetric type pair
//! (b, a), which wants opposite shifts. That asymmetry is a CHSH game in
//! disguise:
//!
//! - any local controller, with or without shared randomness, reaches an
//!   expected good-gluing fraction of at most 3/4 ([`strategy::enumerate_deterministic`]
//!   is the constructive proof);
//! - a controller measuring one entangled biphoton per step reaches
//!   (2 + sqrt(2)) / 4, about 0.8536, a gain of (2 + sqrt(2)) / 3, about
//!   1.138 ([`quantum::chsh`] computes the underlying combination exactly);
//! - waiting for a site-1 -> site-2 relay each step makes gluing perfect
//!   but pays one cross-site latency per step ([`distsim`] quantifies the
//!   trade-off).
//!
//! All sampling is seed-deterministic: every random decision flows from a
//! caller-supplied stream, one uniform draw per decision, in documented
//! order.

pub mod assembly;
pub mod distsim;
pub mod error;
pub mod quantum;
pub mod strategy;

pub use assembly::{criticality, noncr_indicator, overlay, Chain, MonoblockType, OverlayReport, SegmentPair, Shift};
pub use error::{Error, Result};
pub use quantum::{
    chsh, expectation, joint_distribution, sample, BiphotonState, JointDistribution,
    MeasurementSettings, Observable, OutcomePair, SettingsVariant,
};
pub use strategy::{
    best_deterministic, enumerate_deterministic, DeterministicStrategy, LocalRule,
    QuantumStrategy, RandomizedClassicalStrategy, Strategy, StrategyValue,
};
pub use distsim::{
    compare_modes, event_log, run_timeline, CompareReport, ControlMode, ModeRow,
    SimulationResult, StepEvent, TimelineConfig,
};
