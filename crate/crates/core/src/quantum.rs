//! Exact two-qubit linear algebra: dichotomic observables as unit Bloch
//! vectors, Born-rule joint distributions over the four +/- outcome pairs,
//! correlated outcome sampling, and CHSH combinations.
//!
//! Conventions fixed here and relied on everywhere else:
//! - computational basis order is |00>, |01>, |10>, |11> with site 1 as the
//!   left qubit;
//! - outcome sampling consumes exactly one uniform draw per emission and
//!   walks the CDF in the fixed order (++, +-, -+, --), so identical seeds
//!   give identical outcome sequences across runs.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

type C = Complex64;

/// Tolerance for structural identities (normalization, probability sums).
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Tolerance for spectral checks (unit Bloch norm, eigenvalues).
pub const SPECTRAL_TOL: f64 = 1e-9;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

type Mat2 = [[C; 2]; 2];
type Mat4 = [[C; 4]; 4];

/// A +/-1-valued single-qubit measurement, stored as a unit Bloch vector.
///
/// The induced 2x2 Hermitian matrix is `nx*sx + ny*sy + nz*sz`; for a unit
/// Bloch vector it squares to the identity, so the eigenvalues are exactly
/// +1 and -1.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    nx: f64,
    ny: f64,
    nz: f64,
    label: String,
}

impl Observable {
    /// Builds an observable from a Bloch vector.
    ///
    /// Inputs are rejected rather than normalized: degenerate observables
    /// have no +/-1 outcome semantics in this model.
    pub fn from_bloch(n: [f64; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (norm - 1.0).abs() > SPECTRAL_TOL {
            return Err(Error::NonUnitBloch { norm });
        }
        Ok(Self {
            nx: n[0],
            ny: n[1],
            nz: n[2],
            label: String::new(),
        })
    }

    /// Attaches a free-form text tag (used for table printouts).
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn sigma_x() -> Self {
        Self::from_bloch([1.0, 0.0, 0.0]).unwrap().with_label("sx")
    }

    pub fn sigma_y() -> Self {
        Self::from_bloch([0.0, 1.0, 0.0]).unwrap().with_label("sy")
    }

    pub fn sigma_z() -> Self {
        Self::from_bloch([0.0, 0.0, 1.0]).unwrap().with_label("sz")
    }

    pub fn bloch(&self) -> [f64; 3] {
        [self.nx, self.ny, self.nz]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The induced Hermitian matrix `nx*sx + ny*sy + nz*sz`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [C::new(self.nz, 0.0), C::new(self.nx, -self.ny)],
            [C::new(self.nx, self.ny), C::new(-self.nz, 0.0)],
        ]
    }
}

/// A normalized two-qubit state over |00>, |01>, |10>, |11>.
#[derive(Debug, Clone, PartialEq)]
pub struct BiphotonState {
    amps: [C; 4],
}

impl BiphotonState {
    /// Builds a state from raw amplitudes; rejects unnormalized input.
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::UnnormalizedState { norm_sq });
        }
        Ok(Self { amps })
    }

    /// The EPR pair (|00> + |11>) / sqrt(2).
    pub fn phi_plus() -> Self {
        let h = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            amps: [h, ZERO, ZERO, h],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }
}

/// Which sign convention the site-2 observables follow.
///
/// `PaperVerbatim` uses a2 = (sz - sx)/sqrt(2), b2 = -(sx + sz)/sqrt(2) and
/// evaluates the CHSH combination to -2*sqrt(2) on |Phi+>. `Corrected`
/// negates both site-2 observables and attains +2*sqrt(2); it is the default
/// everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SettingsVariant {
    PaperVerbatim,
    Corrected,
}

impl SettingsVariant {
    pub fn name(&self) -> &'static str {
        match self {
            SettingsVariant::PaperVerbatim => "paper-verbatim",
            SettingsVariant::Corrected => "corrected",
        }
    }
}

/// The four measurement settings (a1, b1 at site 1; a2, b2 at site 2).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSettings {
    a1: Observable,
    b1: Observable,
    a2: Observable,
    b2: Observable,
    variant: SettingsVariant,
}

impl MeasurementSettings {
    /// a1 = sx, b1 = sz, a2 = (sx - sz)/sqrt(2), b2 = (sx + sz)/sqrt(2).
    pub fn corrected() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a1: Observable::sigma_x().with_label("a1"),
            b1: Observable::sigma_z().with_label("b1"),
            a2: Observable::from_bloch([r, 0.0, -r]).unwrap().with_label("a2"),
            b2: Observable::from_bloch([r, 0.0, r]).unwrap().with_label("b2"),
            variant: SettingsVariant::Corrected,
        }
    }

    /// a1 = sx, b1 = sz, a2 = (sz - sx)/sqrt(2), b2 = -(sx + sz)/sqrt(2).
    pub fn paper_verbatim() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a1: Observable::sigma_x().with_label("a1"),
            b1: Observable::sigma_z().with_label("b1"),
            a2: Observable::from_bloch([-r, 0.0, r]).unwrap().with_label("a2"),
            b2: Observable::from_bloch([-r, 0.0, -r]).unwrap().with_label("b2"),
            variant: SettingsVariant::PaperVerbatim,
        }
    }

    pub fn for_variant(variant: SettingsVariant) -> Self {
        match variant {
            SettingsVariant::Corrected => Self::corrected(),
            SettingsVariant::PaperVerbatim => Self::paper_verbatim(),
        }
    }

    pub fn variant(&self) -> SettingsVariant {
        self.variant
    }

    pub fn a1(&self) -> &Observable {
        &self.a1
    }

    pub fn b1(&self) -> &Observable {
        &self.b1
    }

    pub fn a2(&self) -> &Observable {
        &self.a2
    }

    pub fn b2(&self) -> &Observable {
        &self.b2
    }
}

/// Shift signs observed at the two sites for one emission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomePair {
    s1: i32,
    s2: i32,
}

impl OutcomePair {
    /// Panics unless both signs are +/-1.
    pub fn new(s1: i32, s2: i32) -> Self {
        assert!(s1 == 1 || s1 == -1, "s1 must be +/-1, got {s1}");
        assert!(s2 == 1 || s2 == -1, "s2 must be +/-1, got {s2}");
        Self { s1, s2 }
    }

    pub fn s1(&self) -> i32 {
        self.s1
    }

    pub fn s2(&self) -> i32 {
        self.s2
    }
}

/// Born-rule probabilities over the four outcome pairs, stored in the fixed
/// CDF order (++, +-, -+, --).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    p: [f64; 4],
}

impl JointDistribution {
    fn index(s1: i32, s2: i32) -> usize {
        match (s1, s2) {
            (1, 1) => 0,
            (1, -1) => 1,
            (-1, 1) => 2,
            (-1, -1) => 3,
            _ => panic!("outcome signs must be +/-1, got ({s1}, {s2})"),
        }
    }

    pub fn prob(&self, s1: i32, s2: i32) -> f64 {
        self.p[Self::index(s1, s2)]
    }

    /// Probabilities in CDF order (++, +-, -+, --).
    pub fn probs(&self) -> [f64; 4] {
        self.p
    }

    /// Sum of s1*s2*p(s1,s2), the correlation implied by the distribution.
    pub fn correlation(&self) -> f64 {
        self.p[0] - self.p[1] - self.p[2] + self.p[3]
    }

    /// Site-1 marginal expectation, sum of s1*p(s1, .).
    pub fn marginal1(&self) -> f64 {
        self.p[0] + self.p[1] - self.p[2] - self.p[3]
    }

    /// Site-2 marginal expectation, sum of s2*p(., s2).
    pub fn marginal2(&self) -> f64 {
        self.p[0] - self.p[1] + self.p[2] - self.p[3]
    }

    /// Draws one outcome pair using a single uniform draw (inverse CDF in
    /// the fixed (++, +-, -+, --) order).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> OutcomePair {
        let u: f64 = rng.random();
        let outcomes = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &(s1, s2)) in outcomes.iter().enumerate() {
            if self.p[i] > 0.0 {
                last_positive = i;
            }
            acc += self.p[i];
            if u < acc {
                return OutcomePair::new(s1, s2);
            }
        }
        // u landed in the rounding dust above the last partial sum; never
        // produce an outcome of probability zero.
        let (s1, s2) = outcomes[last_positive];
        OutcomePair::new(s1, s2)
    }
}

// --- small fixed-size complex matrix helpers -------------------------------

fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// (I + s*A) / 2, the spectral projector of A onto the outcome s.
fn projector(a: &Mat2, s: i32) -> Mat2 {
    let sign = C::new(s as f64, 0.0);
    let id = identity2();
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (id[i][j] + sign * a[i][j]) * C::new(0.5, 0.0);
        }
    }
    out
}

/// Kronecker product; the left factor acts on site 1 (the left qubit).
fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// <psi| M |psi> for a 4x4 operator.
fn quadratic_form(m: &Mat4, psi: &[C; 4]) -> C {
    let mut acc = ZERO;
    for (i, row) in m.iter().enumerate() {
        let mut mv = ZERO;
        for (j, entry) in row.iter().enumerate() {
            mv += entry * psi[j];
        }
        acc += psi[i].conj() * mv;
    }
    acc
}

// --- operations -------------------------------------------------------------

/// <Psi| A (x) B |Psi> via the explicit tensor-product matrix.
///
/// The value of a Hermitian form is real; the imaginary part is asserted
/// below 1e-9 and discarded.
pub fn expectation(state: &BiphotonState, a: &Observable, b: &Observable) -> f64 {
    let m = kron(&a.matrix(), &b.matrix());
    let e = quadratic_form(&m, state.amplitudes());
    assert!(
        e.im.abs() < SPECTRAL_TOL,
        "expectation of a Hermitian form must be real, got imaginary part {}",
        e.im
    );
    e.re
}

/// Born-rule joint distribution: p(s1,s2) = <Psi| P(s1) (x) P(s2) |Psi> with
/// P the spectral projectors (I + s*A)/2.
pub fn joint_distribution(
    state: &BiphotonState,
    a: &Observable,
    b: &Observable,
) -> JointDistribution {
    let ma = a.matrix();
    let mb = b.matrix();
    let mut p = [0.0; 4];
    for (i, &(s1, s2)) in [(1, 1), (1, -1), (-1, 1), (-1, -1)].iter().enumerate() {
        let m = kron(&projector(&ma, s1), &projector(&mb, s2));
        let v = quadratic_form(&m, state.amplitudes());
        assert!(
            v.im.abs() < SPECTRAL_TOL,
            "projector expectation must be real, got imaginary part {}",
            v.im
        );
        // Clamp the rounding dust below zero; projector expectations are
        // nonnegative exactly.
        p[i] = v.re.max(0.0);
    }
    JointDistribution { p }
}

/// One emission: draws an outcome pair from the Born-rule distribution.
pub fn sample<R: Rng + ?Sized>(
    state: &BiphotonState,
    a: &Observable,
    b: &Observable,
    rng: &mut R,
) -> OutcomePair {
    joint_distribution(state, a, b).sample(rng)
}

/// The CHSH combination E(a1 b2) + E(b1 b2) + E(a1 a2) - E(b1 a2) for
/// arbitrary observables.
pub fn chsh_observables(
    state: &BiphotonState,
    a1: &Observable,
    b1: &Observable,
    a2: &Observable,
    b2: &Observable,
) -> f64 {
    expectation(state, a1, b2) + expectation(state, b1, b2) + expectation(state, a1, a2)
        - expectation(state, b1, a2)
}

/// The CHSH combination for a settings quadruple.
pub fn chsh(state: &BiphotonState, settings: &MeasurementSettings) -> f64 {
    chsh_observables(
        state,
        settings.a1(),
        settings.b1(),
        settings.a2(),
        settings.b2(),
    )
}
