use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Temperature class of a microstate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BinLabel {
    /// Far sub-critical.
    FSbCR,
    /// Sub-critical.
    SbCR,
    /// Critical.
    CR,
    /// Super-critical.
    SpCR,
}

impl BinLabel {
    /// Label order used for class indices.
    pub const ALL: [BinLabel; 4] = [BinLabel::FSbCR, BinLabel::SbCR, BinLabel::CR, BinLabel::SpCR];

    pub fn name(self) -> &'static str {
        match self {
            BinLabel::FSbCR => "FSbCR",
            BinLabel::SbCR => "SbCR",
            BinLabel::CR => "CR",
            BinLabel::SpCR => "SpCR",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BinLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BinLabel::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown bin {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Validation, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Edges of the four bins in units of `J / k_B`. Every bin is half-open
/// `[lo, hi)` except the last, which also contains its upper edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinEdges {
    pub edges: [f64; 5],
}

pub const DEFAULT_BIN_EDGES: BinEdges = BinEdges {
    edges: [0.0, 1.055, 2.119, 2.320, 4.0],
};

/// The critical bin may be at most this fraction of any other bin's width.
pub const MAX_CRITICAL_WIDTH_RATIO: f64 = 0.30;

impl Default for BinEdges {
    fn default() -> Self {
        DEFAULT_BIN_EDGES
    }
}

impl BinEdges {
    pub fn validate(&self) -> Result<()> {
        let e = &self.edges;
        if e[0] != 0.0 || e[4] != 4.0 {
            return Err(Error::InvalidConfig(format!("bin edges must span [0, 4], got {e:?}")));
        }
        if e.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidConfig(format!("bin edges not strictly increasing: {e:?}")));
        }
        let cr = self.width(BinLabel::CR);
        for other in [BinLabel::FSbCR, BinLabel::SbCR, BinLabel::SpCR] {
            if cr > MAX_CRITICAL_WIDTH_RATIO * self.width(other) {
                return Err(Error::InvalidConfig(format!(
                    "critical bin width {cr} exceeds {MAX_CRITICAL_WIDTH_RATIO} of {other} width {}",
                    self.width(other)
                )));
            }
        }
        Ok(())
    }

    pub fn width(&self, bin: BinLabel) -> f64 {
        let i = bin.index();
        self.edges[i + 1] - self.edges[i]
    }

    pub fn label(&self, temperature: f64) -> Result<BinLabel> {
        let e = &self.edges;
        if !(temperature >= e[0] && temperature <= e[4]) {
            return Err(Error::TemperatureOutOfRange(temperature));
        }
        Ok(BinLabel::ALL
            .into_iter()
            .find(|b| temperature < e[b.index() + 1])
            .unwrap_or(BinLabel::SpCR))
    }
}

pub fn bin_label(temperature: f64) -> Result<BinLabel> {
    DEFAULT_BIN_EDGES.label(temperature)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTriple {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

impl SplitTriple {
    pub fn get(&self, split: Split) -> usize {
        match split {
            Split::Train => self.train,
            Split::Validation => self.validation,
            Split::Test => self.test,
        }
    }

    pub fn total(&self) -> usize {
        self.train + self.validation + self.test
    }
}

/// Per-bin image counts for each split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts(pub BTreeMap<BinLabel, SplitTriple>);

impl SplitCounts {
    /// Images per bin and split for one boundary condition.
    pub fn table_defaults() -> Self {
        let rows = [
            (BinLabel::FSbCR, 220, 100, 150),
            (BinLabel::SbCR, 80, 50, 50),
            (BinLabel::CR, 90, 60, 70),
            (BinLabel::SpCR, 210, 90, 130),
        ];
        SplitCounts(
            rows.into_iter()
                .map(|(b, train, validation, test)| (b, SplitTriple { train, validation, test }))
                .collect(),
        )
    }

    pub fn get(&self, bin: BinLabel, split: Split) -> usize {
        self.0.get(&bin).map_or(0, |t| t.get(split))
    }

    pub fn bin_total(&self, bin: BinLabel) -> usize {
        self.0.get(&bin).map_or(0, SplitTriple::total)
    }

    pub fn split_total(&self, split: Split) -> usize {
        self.0.values().map(|t| t.get(split)).sum()
    }

    pub fn total(&self) -> usize {
        self.0.values().map(SplitTriple::total).sum()
    }
}

impl Default for SplitCounts {
    fn default() -> Self {
        Self::table_defaults()
    }
}

/// Temperatures `k * step` for `k = 1 ..= round(4 / step)`; zero is excluded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TemperatureGrid {
    step: f64,
    points: u32,
}

pub const MIN_TEMPERATURE_STEP: f64 = 0.01;

impl TemperatureGrid {
    pub fn new(step: f64) -> Result<Self> {
        if !(step >= MIN_TEMPERATURE_STEP) || step > 4.0 {
            return Err(Error::InvalidConfig(format!(
                "temperature step must lie in [{MIN_TEMPERATURE_STEP}, 4], got {step}"
            )));
        }
        let points = (4.0 / step + 1e-9).floor() as u32;
        Ok(TemperatureGrid { step, points })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> u32 {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    /// Temperature at grid index `k` (1-based), rounded to 1e-9 so that
    /// `232 * 0.01` is exactly `2.32`.
    pub fn temperature(&self, k: u32) -> f64 {
        (k as f64 * self.step * 1e9).round() / 1e9
    }

    pub fn index_of(&self, temperature: f64) -> Option<u32> {
        let k = (temperature / self.step).round();
        (k >= 1.0 && k <= self.points as f64 && self.temperature(k as u32) == temperature)
            .then_some(k as u32)
    }

    /// Grid indices whose temperature falls in `bin`, ascending.
    pub fn indices_in(&self, edges: &BinEdges, bin: BinLabel) -> Vec<u32> {
        (1..=self.points)
            .filter(|&k| edges.label(self.temperature(k)).ok() == Some(bin))
            .collect()
    }
}
