//! Controller strategies for the two assembly sites: deterministic local
//! rules, shared-randomness mixtures over them, and the biphoton controller.
//!
//! Exact per-step quality comes from the identity
//! `E(NonCr) = (1 + S/4) / 2` where `S` is the combination
//! `E(a1 b2) + E(b1 b2) + E(a1 a2) - E(b1 a2)` of the four shift variables
//! (type a or b at site 1 or 2), averaged over equiprobable type pairs.
//! Enumerating all 16 deterministic strategies proves the classical bound
//! `S <= 2`, i.e. `E(NonCr) <= 0.75`; the biphoton controller reaches
//! `S = 2*sqrt(2)`.
//!
//! Randomness conventions, fixed for reproducibility:
//! - monoblock types are one boolean draw each (false -> a, true -> b),
//!   site 1 first;
//! - a shared-randomness strategy draws one uniform per step (fresh lambda
//!   each step) and walks the 16 weights in canonical order;
//! - the biphoton controller draws one uniform per step (see
//!   [`crate::quantum::JointDistribution::sample`]).

use std::fmt;

use rand::Rng;

use crate::assembly::{self, Chain, MonoblockType, SegmentPair, Shift};
use crate::error::{Error, Result};
use crate::quantum::{self, BiphotonState, JointDistribution, MeasurementSettings, Observable, OutcomePair};

/// Shift sign chosen by one site for each monoblock type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalRule {
    on_a: Shift,
    on_b: Shift,
}

impl LocalRule {
    pub fn new(on_a: Shift, on_b: Shift) -> Self {
        Self { on_a, on_b }
    }

    /// The four rules in canonical order: (+,+), (+,-), (-,+), (-,-).
    pub fn all() -> [LocalRule; 4] {
        use Shift::{Back, Forward};
        [
            LocalRule::new(Forward, Forward),
            LocalRule::new(Forward, Back),
            LocalRule::new(Back, Forward),
            LocalRule::new(Back, Back),
        ]
    }

    pub fn apply(&self, t: MonoblockType) -> Shift {
        match t {
            MonoblockType::A => self.on_a,
            MonoblockType::B => self.on_b,
        }
    }

    pub fn on_a(&self) -> Shift {
        self.on_a
    }

    pub fn on_b(&self) -> Shift {
        self.on_b
    }
}

/// A pair of local rules, one per site. There are exactly 16.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterministicStrategy {
    site1: LocalRule,
    site2: LocalRule,
}

impl DeterministicStrategy {
    pub fn new(site1: LocalRule, site2: LocalRule) -> Self {
        Self { site1, site2 }
    }

    /// All 16 strategies in canonical order: index `i` pairs rule `i / 4`
    /// at site 1 with rule `i % 4` at site 2 (rules in [`LocalRule::all`]
    /// order). This is also the weight order of `mix:` specs.
    pub fn all() -> [DeterministicStrategy; 16] {
        let rules = LocalRule::all();
        std::array::from_fn(|i| DeterministicStrategy::new(rules[i / 4], rules[i % 4]))
    }

    pub fn site1(&self) -> LocalRule {
        self.site1
    }

    pub fn site2(&self) -> LocalRule {
        self.site2
    }

    /// Shift signs for one step given the observed types.
    pub fn outcome(&self, c1: MonoblockType, c2: MonoblockType) -> OutcomePair {
        OutcomePair::new(self.site1.apply(c1).sign(), self.site2.apply(c2).sign())
    }

    /// The combination a1*b2 + b1*b2 + a1*a2 - b1*a2 of the four assigned
    /// signs; always +/-2 (one bracket of a1(b2+a2) + b1(b2-a2) vanishes).
    pub fn chsh_combination(&self) -> i32 {
        let a1 = self.site1.on_a.sign();
        let b1 = self.site1.on_b.sign();
        let a2 = self.site2.on_a.sign();
        let b2 = self.site2.on_b.sign();
        a1 * b2 + b1 * b2 + a1 * a2 - b1 * a2
    }

    /// Spec string `det:<s1a><s1b><s2a><s2b>`.
    pub fn spec_string(&self) -> String {
        format!(
            "det:{}{}{}{}",
            self.site1.on_a.as_char(),
            self.site1.on_b.as_char(),
            self.site2.on_a.as_char(),
            self.site2.on_b.as_char()
        )
    }
}

/// The canonical best deterministic strategy (`det:++++`, value 0.75).
/// Seven other strategies tie; this one is the first in canonical order.
pub fn best_deterministic() -> DeterministicStrategy {
    DeterministicStrategy::all()[0]
}

/// Shared randomness: a probability vector over the 16 deterministic
/// strategies, redrawn fresh at every step.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedClassicalStrategy {
    weights: [f64; 16],
}

impl RandomizedClassicalStrategy {
    pub fn new(weights: [f64; 16]) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weights must be finite and nonnegative, got {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!(
                "weights must sum to 1 within 1e-12, got {total}"
            )));
        }
        Ok(Self { weights })
    }

    pub fn uniform() -> Self {
        Self {
            weights: [1.0 / 16.0; 16],
        }
    }

    pub fn weights(&self) -> &[f64; 16] {
        &self.weights
    }

    /// Draws lambda: one uniform, inverse CDF over the canonical order.
    fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> DeterministicStrategy {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, w) in self.weights.iter().enumerate() {
            if *w > 0.0 {
                last_positive = i;
            }
            acc += w;
            if u < acc {
                return DeterministicStrategy::all()[i];
            }
        }
        // u landed in the rounding dust above the last partial sum; never
        // pick a zero-weight strategy.
        DeterministicStrategy::all()[last_positive]
    }
}

/// The biphoton controller: one entangled pair per step, measured at each
/// site with the observable selected by the local monoblock type (type a at
/// site i uses a_i, type b uses b_i).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumStrategy {
    state: BiphotonState,
    settings: MeasurementSettings,
}

impl QuantumStrategy {
    pub fn new(state: BiphotonState, settings: MeasurementSettings) -> Self {
        Self { state, settings }
    }

    pub fn state(&self) -> &BiphotonState {
        &self.state
    }

    pub fn settings(&self) -> &MeasurementSettings {
        &self.settings
    }

    fn observables(&self, c1: MonoblockType, c2: MonoblockType) -> (&Observable, &Observable) {
        let o1 = match c1 {
            MonoblockType::A => self.settings.a1(),
            MonoblockType::B => self.settings.b1(),
        };
        let o2 = match c2 {
            MonoblockType::A => self.settings.a2(),
            MonoblockType::B => self.settings.b2(),
        };
        (o1, o2)
    }

    fn distribution(&self, c1: MonoblockType, c2: MonoblockType) -> JointDistribution {
        let (o1, o2) = self.observables(c1, c2);
        quantum::joint_distribution(&self.state, o1, o2)
    }
}

/// Exact per-step value of a strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyValue {
    /// Expected fraction of good gluings, in [0, 1].
    pub exact_noncr: f64,
    /// The CHSH combination S; exact_noncr = (1 + S/4) / 2.
    pub chsh_s: f64,
}

/// Any controller the CPU can run.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Deterministic(DeterministicStrategy),
    Randomized(RandomizedClassicalStrategy),
    Quantum(QuantumStrategy),
}

impl Strategy {
    /// Parses a spec string:
    /// `det:<s1a><s1b><s2a><s2b>` with each slot `+` or `-`,
    /// `mix:<16 comma-separated weights>`, `quantum:corrected`,
    /// or `quantum:paper-verbatim`.
    pub fn parse(spec: &str) -> Result<Strategy> {
        let fail = |reason: &str| Error::ParseStrategy {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        if let Some(rest) = spec.strip_prefix("det:") {
            let slots: Vec<char> = rest.chars().collect();
            if slots.len() != 4 {
                return Err(fail("expected exactly four sign slots after `det:`"));
            }
            let mut signs = [Shift::Forward; 4];
            for (i, c) in slots.iter().enumerate() {
                signs[i] = match c {
                    '+' => Shift::Forward,
                    '-' => Shift::Back,
                    _ => return Err(fail("sign slots must be `+` or `-`")),
                };
            }
            return Ok(Strategy::Deterministic(DeterministicStrategy::new(
                LocalRule::new(signs[0], signs[1]),
                LocalRule::new(signs[2], signs[3]),
            )));
        }
        if let Some(rest) = spec.strip_prefix("mix:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 16 {
                return Err(fail(&format!(
                    "expected 16 comma-separated weights, got {}",
                    parts.len()
                )));
            }
            let mut weights = [0.0; 16];
            for (i, part) in parts.iter().enumerate() {
                weights[i] = part
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| fail(&format!("weight {}: {e}", i + 1)))?;
            }
            let mixed = RandomizedClassicalStrategy::new(weights)
                .map_err(|e| fail(&e.to_string()))?;
            return Ok(Strategy::Randomized(mixed));
        }
        if let Some(rest) = spec.strip_prefix("quantum:") {
            let settings = match rest {
                "corrected" => MeasurementSettings::corrected(),
                "paper-verbatim" => MeasurementSettings::paper_verbatim(),
                _ => return Err(fail("expected `corrected` or `paper-verbatim`")),
            };
            return Ok(Strategy::Quantum(QuantumStrategy::new(
                BiphotonState::phi_plus(),
                settings,
            )));
        }
        Err(fail("expected a `det:`, `mix:` or `quantum:` prefix"))
    }

    /// Exact per-step value.
    ///
    /// Deterministic strategies average the criticality table over the four
    /// equiprobable type pairs; mixtures combine convexly; the biphoton
    /// controller maps its CHSH value through (1 + S/4) / 2.
    pub fn exact_value(&self) -> StrategyValue {
        match self {
            Strategy::Deterministic(d) => {
                let pairs = [
                    (MonoblockType::A, MonoblockType::A),
                    (MonoblockType::A, MonoblockType::B),
                    (MonoblockType::B, MonoblockType::A),
                    (MonoblockType::B, MonoblockType::B),
                ];
                let noncr_sum: f64 = pairs
                    .iter()
                    .map(|&(c1, c2)| {
                        let o = d.outcome(c1, c2);
                        let seg = SegmentPair::new(
                            c1,
                            c2,
                            Shift::from_sign(o.s1()).unwrap(),
                            Shift::from_sign(o.s2()).unwrap(),
                        );
                        assembly::noncr_indicator(assembly::criticality(&seg)).unwrap()
                    })
                    .sum();
                StrategyValue {
                    exact_noncr: noncr_sum / 4.0,
                    chsh_s: d.chsh_combination() as f64,
                }
            }
            Strategy::Randomized(m) => {
                let mut exact_noncr = 0.0;
                let mut chsh_s = 0.0;
                for (w, d) in m.weights.iter().zip(DeterministicStrategy::all()) {
                    let v = Strategy::Deterministic(d).exact_value();
                    exact_noncr += w * v.exact_noncr;
                    chsh_s += w * v.chsh_s;
                }
                StrategyValue { exact_noncr, chsh_s }
            }
            Strategy::Quantum(q) => {
                let s = quantum::chsh(&q.state, &q.settings);
                StrategyValue {
                    exact_noncr: (1.0 + s / 4.0) / 2.0,
                    chsh_s: s,
                }
            }
        }
    }

    /// One control step: shift signs for the observed type pair.
    pub fn step<R: Rng + ?Sized>(
        &self,
        c1: MonoblockType,
        c2: MonoblockType,
        rng: &mut R,
    ) -> OutcomePair {
        match self {
            Strategy::Deterministic(d) => d.outcome(c1, c2),
            Strategy::Randomized(m) => m.pick(rng).outcome(c1, c2),
            Strategy::Quantum(q) => q.distribution(c1, c2).sample(rng),
        }
    }

    /// Runs a two-site assembly of `steps` monoblocks. Types are i.i.d.
    /// uniform per site per step; shifts come from [`Strategy::step`].
    pub fn run_assembly<R: Rng + ?Sized>(&self, steps: usize, rng: &mut R) -> (Chain, Chain) {
        // The biphoton controller only ever needs the four distributions
        // fixed by the type pair; precompute them so long runs stay cheap.
        // Sampling consumes the same single uniform either way.
        let quantum_dists: Option<[JointDistribution; 4]> = match self {
            Strategy::Quantum(q) => Some([
                q.distribution(MonoblockType::A, MonoblockType::A),
                q.distribution(MonoblockType::A, MonoblockType::B),
                q.distribution(MonoblockType::B, MonoblockType::A),
                q.distribution(MonoblockType::B, MonoblockType::B),
            ]),
            _ => None,
        };
        let mut blocks1 = Vec::with_capacity(steps);
        let mut blocks2 = Vec::with_capacity(steps);
        for _ in 0..steps {
            let c1 = draw_type(rng);
            let c2 = draw_type(rng);
            let outcome = match (&quantum_dists, self) {
                (Some(dists), _) => {
                    let idx = 2 * usize::from(c1 == MonoblockType::B)
                        + usize::from(c2 == MonoblockType::B);
                    dists[idx].sample(rng)
                }
                (None, s) => s.step(c1, c2, rng),
            };
            blocks1.push((c1, Shift::from_sign(outcome.s1()).unwrap()));
            blocks2.push((c2, Shift::from_sign(outcome.s2()).unwrap()));
        }
        (Chain::from_blocks(blocks1), Chain::from_blocks(blocks2))
    }

    /// One Monte Carlo run: overlay fraction plus its binomial standard
    /// error sqrt(mean * (1 - mean) / steps).
    pub fn estimate_mc<R: Rng + ?Sized>(&self, steps: usize, rng: &mut R) -> (f64, f64) {
        assert!(steps >= 1, "estimate_mc requires steps >= 1");
        let (chain1, chain2) = self.run_assembly(steps, rng);
        let report = assembly::overlay(&chain1, &chain2)
            .expect("chains from run_assembly are nonempty and equal length");
        let mean = report.noncr_fraction();
        let stderr = (mean * (1.0 - mean) / steps as f64).sqrt();
        (mean, stderr)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Deterministic(d) => write!(f, "{}", d.spec_string()),
            Strategy::Randomized(m) => {
                write!(f, "mix:")?;
                for (i, w) in m.weights.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{w}")?;
                }
                Ok(())
            }
            Strategy::Quantum(q) => write!(f, "quantum:{}", q.settings.variant().name()),
        }
    }
}

fn draw_type<R: Rng + ?Sized>(rng: &mut R) -> MonoblockType {
    if rng.random::<bool>() {
        MonoblockType::B
    } else {
        MonoblockType::A
    }
}

/// Values of all 16 deterministic strategies in canonical order; the
/// constructive proof that no local strategy beats 0.75.
pub fn enumerate_deterministic() -> Vec<(DeterministicStrategy, StrategyValue)> {
    DeterministicStrategy::all()
        .into_iter()
        .map(|d| (d, Strategy::Deterministic(d).exact_value()))
        .collect()
}
