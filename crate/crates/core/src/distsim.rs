//! Discrete-event timeline of the one-way control scheme: a CPU broadcasts
//! one control signal per step to two remote assembly sites, without ever
//! waiting for a reply. The two-way feedback baseline relays each step
//! through a site-1 -> site-2 message, which buys perfect gluing at the
//! price of one cross-site latency per step.
//!
//! Timing model. At t = 0 the CPU emits a session broadcast; both sites are
//! ready at t0 = max(d1, d2) / signal_speed. Step k (k = 1..=M) then
//! completes at t0 + k * P with period P = cadence for one-way modes and
//! P = cadence + d12 / signal_speed for feedback, giving the makespan
//! t0 + M * P. Event rows expose the emission and arrival instants behind
//! that schedule.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assembly::{overlay, Chain, MonoblockType, OverlayReport, SegmentPair, Shift};
use crate::error::{Error, Result};
use crate::quantum::MeasurementSettings;
use crate::strategy::{best_deterministic, QuantumStrategy, Strategy};
use crate::BiphotonState;

/// Default signal speed: the speed of light in m/s.
pub const DEFAULT_SIGNAL_SPEED: f64 = 2.998e8;

/// Geometry and pacing of one synthesis session.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelineConfig {
    /// CPU -> site 1 distance, meters.
    pub d1: f64,
    /// CPU -> site 2 distance, meters.
    pub d2: f64,
    /// Site 1 -> site 2 distance, meters.
    pub d12: f64,
    /// Signal propagation speed, m/s.
    pub signal_speed: f64,
    /// Seconds between consecutive CPU emissions.
    pub cadence: f64,
    /// Number of monoblocks to attach.
    pub steps: usize,
}

impl Default for TimelineConfig {
    fn default() -> Self {
        Self {
            d1: 0.0,
            d2: 0.0,
            d12: 0.0,
            signal_speed: DEFAULT_SIGNAL_SPEED,
            cadence: 0.0,
            steps: 0,
        }
    }
}

impl TimelineConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64, nonneg: bool| -> Result<()> {
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be finite, got {v}")));
            }
            if nonneg && v < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be nonnegative, got {v}"
                )));
            }
            Ok(())
        };
        check("d1", self.d1, true)?;
        check("d2", self.d2, true)?;
        check("d12", self.d12, true)?;
        check("cadence", self.cadence, true)?;
        check("signal_speed", self.signal_speed, false)?;
        if self.signal_speed <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "signal_speed must be positive, got {}",
                self.signal_speed
            )));
        }
        Ok(())
    }

    /// Session sync offset: time until both sites have heard the CPU.
    fn t0(&self) -> f64 {
        self.d1.max(self.d2) / self.signal_speed
    }
}

/// How the shift signs are decided.
#[derive(Debug, Clone, PartialEq)]
pub enum ControlMode {
    /// CPU broadcasts; shifts come from a classical strategy (`det:` or
    /// `mix:`).
    OneWayClassical(Strategy),
    /// CPU broadcasts one biphoton per step; shifts are measurement
    /// outcomes.
    OneWayQuantum(Strategy),
    /// Site 1 attaches with shift + and relays (type, shift) to site 2,
    /// which matches the shift so every gluing is good.
    TwoWayFeedback,
}

impl ControlMode {
    pub fn label(&self) -> &'static str {
        match self {
            ControlMode::OneWayClassical(_) => "one-way-classical",
            ControlMode::OneWayQuantum(_) => "one-way-quantum",
            ControlMode::TwoWayFeedback => "two-way-feedback",
        }
    }

    /// Extra per-step latency on top of the cadence.
    fn extra_latency(&self, config: &TimelineConfig) -> f64 {
        match self {
            ControlMode::TwoWayFeedback => config.d12 / config.signal_speed,
            _ => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ControlMode::OneWayClassical(Strategy::Quantum(_)) => Err(Error::InvalidConfig(
                "one-way-classical mode requires a det: or mix: strategy".into(),
            )),
            ControlMode::OneWayQuantum(s) if !matches!(s, Strategy::Quantum(_)) => {
                Err(Error::InvalidConfig(
                    "one-way-quantum mode requires a quantum: strategy".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// Outcome of one simulated session.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub chains: (Chain, Chain),
    /// Overlay quality; `None` when no steps were simulated.
    pub report: Option<OverlayReport>,
    /// Seconds from the session broadcast to the last attachment.
    pub makespan_s: f64,
    /// Seconds per step: cadence plus any cross-site relay latency.
    pub per_step_latency_s: f64,
}

/// One row of the per-step event log.
#[derive(Debug, Clone, PartialEq)]
pub struct StepEvent {
    pub step: usize,
    pub emit_time: f64,
    pub arrive1_time: f64,
    /// For feedback mode this is the relay arrival, the instant site 2 can
    /// act.
    pub arrive2_time: f64,
    pub type1: MonoblockType,
    pub type2: MonoblockType,
    pub s1: i32,
    pub s2: i32,
    pub cr: i32,
}

fn feedback_chains<R: Rng + ?Sized>(steps: usize, rng: &mut R) -> (Chain, Chain) {
    let mut blocks1 = Vec::with_capacity(steps);
    let mut blocks2 = Vec::with_capacity(steps);
    for _ in 0..steps {
        let c1 = if rng.random::<bool>() { MonoblockType::B } else { MonoblockType::A };
        let c2 = if rng.random::<bool>() { MonoblockType::B } else { MonoblockType::A };
        let s1 = Shift::Forward;
        // s2 = s1 except for the asymmetric pair (b, a), where matching
        // requires the opposite shift.
        let s2 = if (c1, c2) == (MonoblockType::B, MonoblockType::A) {
            Shift::Back
        } else {
            Shift::Forward
        };
        blocks1.push((c1, s1));
        blocks2.push((c2, s2));
    }
    (Chain::from_blocks(blocks1), Chain::from_blocks(blocks2))
}

/// Simulates one session: chains, overlay quality, and the makespan
/// t0 + M * (cadence + extra).
pub fn run_timeline<R: Rng + ?Sized>(
    config: &TimelineConfig,
    mode: &ControlMode,
    rng: &mut R,
) -> Result<SimulationResult> {
    config.validate()?;
    mode.validate()?;
    let chains = match mode {
        ControlMode::OneWayClassical(s) | ControlMode::OneWayQuantum(s) => {
            s.run_assembly(config.steps, rng)
        }
        ControlMode::TwoWayFeedback => feedback_chains(config.steps, rng),
    };
    let report = if config.steps == 0 {
        None
    } else {
        Some(overlay(&chains.0, &chains.1).expect("equal-length nonempty chains"))
    };
    let m = config.steps as f64;
    let extra = mode.extra_latency(config);
    let makespan_s = config.t0() + m * config.cadence + m * extra;
    Ok(SimulationResult {
        chains,
        report,
        makespan_s,
        per_step_latency_s: config.cadence + extra,
    })
}

/// Reconstructs the per-step event rows for chains produced by
/// [`run_timeline`] under the same config and mode.
pub fn event_log(
    config: &TimelineConfig,
    mode: &ControlMode,
    chains: &(Chain, Chain),
) -> Vec<StepEvent> {
    let v = config.signal_speed;
    let extra = mode.extra_latency(config);
    let period = config.cadence + extra;
    let t0 = config.t0();
    let feedback = matches!(mode, ControlMode::TwoWayFeedback);
    chains
        .0
        .blocks()
        .iter()
        .zip(chains.1.blocks())
        .enumerate()
        .map(|(k, (&(c1, s1), &(c2, s2)))| {
            let n = (k + 1) as f64;
            let (emit, arrive1, arrive2) = if feedback {
                // The decisive path is CPU -> site 1 -> site 2; emission is
                // paced so the relay lands exactly at the step deadline.
                let completion = t0 + n * period;
                let emit = completion - (config.d1 + config.d12) / v;
                (emit, emit + config.d1 / v, completion)
            } else {
                let emit = n * config.cadence;
                (emit, emit + config.d1 / v, emit + config.d2 / v)
            };
            let cr = crate::assembly::criticality(&SegmentPair::new(c1, c2, s1, s2));
            StepEvent {
                step: k,
                emit_time: emit,
                arrive1_time: arrive1,
                arrive2_time: arrive2,
                type1: c1,
                type2: c2,
                s1: s1.sign(),
                s2: s2.sign(),
                cr,
            }
        })
        .collect()
}

/// One row of the mode comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeRow {
    pub mode: String,
    pub strategy: Option<String>,
    /// Exact per-step quality of the controller (1.0 for feedback).
    pub exact_noncr: f64,
    /// Measured overlay fraction; `None` when steps = 0.
    pub measured_noncr: Option<f64>,
    pub makespan_s: f64,
}

/// Comparison of the three control modes on one config.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<ModeRow>,
    /// Exact quantum / classical quality ratio, (2 + sqrt(2)) / 3.
    pub quality_ratio: f64,
}

/// Runs all three modes on the same config. The classical row uses the best
/// deterministic strategy; per-mode random streams are derived as
/// base_seed + row index.
pub fn compare_modes(config: &TimelineConfig, base_seed: u64) -> Result<CompareReport> {
    config.validate()?;
    let classical = Strategy::Deterministic(best_deterministic());
    let quantum = Strategy::Quantum(QuantumStrategy::new(
        BiphotonState::phi_plus(),
        MeasurementSettings::corrected(),
    ));
    let exact_classical = classical.exact_value().exact_noncr;
    let exact_quantum = quantum.exact_value().exact_noncr;
    let modes = [
        (ControlMode::OneWayClassical(classical.clone()), Some(classical.to_string()), exact_classical),
        (ControlMode::OneWayQuantum(quantum.clone()), Some(quantum.to_string()), exact_quantum),
        (ControlMode::TwoWayFeedback, None, 1.0),
    ];
    let mut rows = Vec::with_capacity(3);
    for (i, (mode, strategy, exact)) in modes.into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(i as u64));
        let result = run_timeline(config, &mode, &mut rng)?;
        rows.push(ModeRow {
            mode: mode.label().to_string(),
            strategy,
            exact_noncr: exact,
            measured_noncr: result.report.map(|r| r.noncr_fraction()),
            makespan_s: result.makespan_s,
        });
    }
    Ok(CompareReport {
        rows,
        quality_ratio: exact_quantum / exact_classical,
    })
}
