//! Chain/monoblock data model, the 16-row gluing rule table, the criticality
//! index, and overlay quality accounting.
//!
//! Gluing quality is fully determined by the quad (c1, c2, s1, s2) of
//! monoblock types and shift signs at equal positions of the two chains:
//! the pair glues well (criticality +1) when s1 == s2, except for the
//! asymmetric type pair (b, a) where it glues well when s1 != s2.

use std::fmt;

use crate::error::{Error, Result};

/// Quarter of a monoblock length: the magnitude of every shift.
/// Documentary only; nothing downstream depends on it.
pub const SHIFT_MAGNITUDE: f64 = 0.25;

/// Monoblock type at a growth point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonoblockType {
    A,
    B,
}

impl MonoblockType {
    pub fn parse(c: char) -> Result<Self> {
        match c {
            'a' => Ok(MonoblockType::A),
            'b' => Ok(MonoblockType::B),
            other => Err(Error::ParseChain(format!(
                "unknown monoblock type `{other}` (expected `a` or `b`)"
            ))),
        }
    }

    pub fn as_char(&self) -> char {
        match self {
            MonoblockType::A => 'a',
            MonoblockType::B => 'b',
        }
    }
}

impl fmt::Display for MonoblockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Direction a monoblock is shifted relative to the equilibrium position of
/// its link; the magnitude is always [`SHIFT_MAGNITUDE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shift {
    Forward,
    Back,
}

impl Shift {
    pub fn sign(&self) -> i32 {
        match self {
            Shift::Forward => 1,
            Shift::Back => -1,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Shift::Forward),
            -1 => Ok(Shift::Back),
            other => Err(Error::ParseChain(format!(
                "shift sign must be +1 or -1, got {other}"
            ))),
        }
    }

    pub fn parse(c: char) -> Result<Self> {
        match c {
            '+' => Ok(Shift::Forward),
            '-' => Ok(Shift::Back),
            other => Err(Error::ParseChain(format!(
                "unknown shift `{other}` (expected `+` or `-`)"
            ))),
        }
    }

    pub fn as_char(&self) -> char {
        match self {
            Shift::Forward => '+',
            Shift::Back => '-',
        }
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// An assembled polymer chain: an ordered sequence of (type, shift) blocks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    blocks: Vec<(MonoblockType, Shift)>,
}

impl Chain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_blocks(blocks: Vec<(MonoblockType, Shift)>) -> Self {
        Self { blocks }
    }

    pub fn push(&mut self, block: MonoblockType, shift: Shift) {
        self.blocks.push((block, shift));
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[(MonoblockType, Shift)] {
        &self.blocks
    }

    /// Serializes to the text format: one `<type><sign>` line per block,
    /// e.g. `a+`, `b-`.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.blocks.len() * 3);
        for (t, s) in &self.blocks {
            out.push(t.as_char());
            out.push(s.as_char());
            out.push('\n');
        }
        out
    }

    /// Parses the line format produced by [`Chain::to_text`]. Blank lines
    /// are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut chars = line.chars();
            let (t, s) = match (chars.next(), chars.next(), chars.next()) {
                (Some(t), Some(s), None) => (t, s),
                _ => {
                    return Err(Error::ParseChain(format!(
                        "line {}: expected two characters `<type><sign>`, got `{line}`",
                        lineno + 1
                    )))
                }
            };
            blocks.push((MonoblockType::parse(t)?, Shift::parse(s)?));
        }
        Ok(Self { blocks })
    }
}

/// The quad of overlaid blocks at one position: types and shifts of both
/// chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentPair {
    pub c1: MonoblockType,
    pub c2: MonoblockType,
    pub s1: Shift,
    pub s2: Shift,
}

impl SegmentPair {
    pub fn new(c1: MonoblockType, c2: MonoblockType, s1: Shift, s2: Shift) -> Self {
        Self { c1, c2, s1, s2 }
    }
}

/// Criticality index of one overlaid segment: +1 for good gluing, -1 for
/// bad.
///
/// Good gluing requires equal shifts for the type pairs (a,a), (a,b) and
/// (b,b), and opposite shifts for (b,a). Equivalently
/// `sign(c1,c2) * s1 * s2` with sign -1 exactly for (b,a); that asymmetry
/// carries the single minus sign of the Bell combination.
pub fn criticality(seg: &SegmentPair) -> i32 {
    let sign = if seg.c1 == MonoblockType::B && seg.c2 == MonoblockType::A {
        -1
    } else {
        1
    };
    sign * seg.s1.sign() * seg.s2.sign()
}

/// NonCr = (1 + Cr) / 2; maps +1 -> 1.0 and -1 -> 0.0.
pub fn noncr_indicator(cr: i32) -> Result<f64> {
    if cr != 1 && cr != -1 {
        return Err(Error::InvalidCriticality(cr));
    }
    Ok((1 + cr) as f64 / 2.0)
}

/// Per-overlay tally of good and bad gluings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlayReport {
    length: usize,
    noncritical_count: usize,
    cr_sum: i64,
    noncr_fraction: f64,
}

impl OverlayReport {
    pub fn length(&self) -> usize {
        self.length
    }

    /// Number of positions with good gluing.
    pub fn noncritical_count(&self) -> usize {
        self.noncritical_count
    }

    /// Sum of the per-position criticality indices.
    pub fn cr_sum(&self) -> i64 {
        self.cr_sum
    }

    /// noncritical_count / length.
    pub fn noncr_fraction(&self) -> f64 {
        self.noncr_fraction
    }
}

/// Superimposes two equal-length chains and scores every position.
pub fn overlay(chain1: &Chain, chain2: &Chain) -> Result<OverlayReport> {
    if chain1.len() != chain2.len() {
        return Err(Error::LengthMismatch {
            left: chain1.len(),
            right: chain2.len(),
        });
    }
    if chain1.is_empty() {
        return Err(Error::EmptyChains);
    }
    let mut cr_sum: i64 = 0;
    let mut noncritical_count = 0usize;
    for (&(c1, s1), &(c2, s2)) in chain1.blocks().iter().zip(chain2.blocks()) {
        let cr = criticality(&SegmentPair::new(c1, c2, s1, s2));
        cr_sum += cr as i64;
        if cr == 1 {
            noncritical_count += 1;
        }
    }
    let length = chain1.len();
    debug_assert_eq!(noncritical_count as i64, (length as i64 + cr_sum) / 2);
    Ok(OverlayReport {
        length,
        noncritical_count,
        cr_sum,
        noncr_fraction: noncritical_count as f64 / length as f64,
    })
}
