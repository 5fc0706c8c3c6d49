//! Gray-zone interest bands along the edges of the rule-book zone.
//!
//! Each of the four sides (high, low, in, out) carries two bands of equal
//! width: band 1 just inside the rule-book box and band 2 just outside it.
//! Intervals are half-open so that every boundary point belongs to exactly
//! one band and band 1 never touches the open rule-book edge:
//!
//! ```text
//! High1: y in [y_high - w, y_high)      High2: y in [y_high, y_high + w)
//! Low1:  y in (y_low, y_low + w]        Low2:  y in (y_low - w, y_low]
//! ```
//!
//! both with `x` strictly inside `(-x_half, x_half)`. For a right-handed
//! batter, who stands on the negative-x side, the in-course bands sit at
//! negative `x`:
//!
//! ```text
//! In1:  x in (-x_half, -x_half + w]     In2:  x in (-x_half - w, -x_half]
//! Out1: x in [x_half - w, x_half)       Out2: x in [x_half, x_half + w)
//! ```
//!
//! with `y` strictly inside `(y_low, y_high)`. Left-handed batters mirror
//! `x -> -x`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::BatterHand;
use crate::zone::RulebookZone;

pub const DEFAULT_BAND_WIDTH: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ZoneBand {
    High1,
    High2,
    Low1,
    Low2,
    In1,
    In2,
    Out1,
    Out2,
}

impl ZoneBand {
    pub const ALL: [ZoneBand; 8] = [
        ZoneBand::High1,
        ZoneBand::High2,
        ZoneBand::Low1,
        ZoneBand::Low2,
        ZoneBand::In1,
        ZoneBand::In2,
        ZoneBand::Out1,
        ZoneBand::Out2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ZoneBand::High1 => "High1",
            ZoneBand::High2 => "High2",
            ZoneBand::Low1 => "Low1",
            ZoneBand::Low2 => "Low2",
            ZoneBand::In1 => "In1",
            ZoneBand::In2 => "In2",
            ZoneBand::Out1 => "Out1",
            ZoneBand::Out2 => "Out2",
        }
    }

    pub fn side(self) -> BandSide {
        match self {
            ZoneBand::High1 | ZoneBand::High2 => BandSide::High,
            ZoneBand::Low1 | ZoneBand::Low2 => BandSide::Low,
            ZoneBand::In1 | ZoneBand::In2 => BandSide::In,
            ZoneBand::Out1 | ZoneBand::Out2 => BandSide::Out,
        }
    }

    /// Band 1 lies inside the rule-book zone.
    pub fn is_inside(self) -> bool {
        matches!(
            self,
            ZoneBand::High1 | ZoneBand::Low1 | ZoneBand::In1 | ZoneBand::Out1
        )
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for ZoneBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ZoneBand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ZoneBand::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown band `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BandSide {
    High,
    Low,
    In,
    Out,
}

impl BandSide {
    pub const ALL: [BandSide; 4] = [BandSide::High, BandSide::Low, BandSide::In, BandSide::Out];

    pub fn bands(self) -> [ZoneBand; 2] {
        match self {
            BandSide::High => [ZoneBand::High1, ZoneBand::High2],
            BandSide::Low => [ZoneBand::Low1, ZoneBand::Low2],
            BandSide::In => [ZoneBand::In1, ZoneBand::In2],
            BandSide::Out => [ZoneBand::Out1, ZoneBand::Out2],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BandSide::High => "High",
            BandSide::Low => "Low",
            BandSide::In => "In",
            BandSide::Out => "Out",
        }
    }
}

/// A single band, or both bands of one side pooled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BandLabel {
    Band(ZoneBand),
    Pooled(BandSide),
}

impl BandLabel {
    pub fn matches(self, set: BandSet) -> bool {
        match self {
            BandLabel::Band(b) => set.contains(b),
            BandLabel::Pooled(side) => side.bands().iter().any(|&b| set.contains(b)),
        }
    }
}

impl From<ZoneBand> for BandLabel {
    fn from(b: ZoneBand) -> Self {
        BandLabel::Band(b)
    }
}

impl fmt::Display for BandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BandLabel::Band(b) => f.write_str(b.as_str()),
            BandLabel::Pooled(s) => write!(f, "{}(1+2)", s.as_str()),
        }
    }
}

/// Set of bands a location falls in. A corner location can be in one
/// vertical and one horizontal band at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BandSet(u8);

impl BandSet {
    pub fn empty() -> Self {
        BandSet(0)
    }

    pub fn insert(&mut self, b: ZoneBand) {
        self.0 |= b.bit();
    }

    pub fn contains(self, b: ZoneBand) -> bool {
        self.0 & b.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = ZoneBand> {
        ZoneBand::ALL.into_iter().filter(move |b| self.contains(*b))
    }
}

impl FromIterator<ZoneBand> for BandSet {
    fn from_iter<I: IntoIterator<Item = ZoneBand>>(iter: I) -> Self {
        let mut s = BandSet::empty();
        for b in iter {
            s.insert(b);
        }
        s
    }
}

/// Rule-book geometry plus band width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandClassifier {
    pub zone: RulebookZone,
    pub width: f64,
}

impl Default for BandClassifier {
    fn default() -> Self {
        BandClassifier {
            zone: RulebookZone::default(),
            width: DEFAULT_BAND_WIDTH,
        }
    }
}

impl BandClassifier {
    pub fn new(zone: RulebookZone, width: f64) -> Option<Self> {
        (width > 0.0 && width.is_finite()).then_some(BandClassifier { zone, width })
    }

    pub fn classify(&self, x: f64, y: f64, hand: BatterHand) -> BandSet {
        classify_band(x, y, hand, &self.zone, self.width)
    }
}

pub fn classify_band(x: f64, y: f64, hand: BatterHand, z: &RulebookZone, w: f64) -> BandSet {
    let mut set = BandSet::empty();
    let (xh, lo, hi) = (z.x_half, z.y_low, z.y_high);

    if x > -xh && x < xh {
        if y >= hi - w && y < hi {
            set.insert(ZoneBand::High1);
        } else if y >= hi && y < hi + w {
            set.insert(ZoneBand::High2);
        }
        if y > lo && y <= lo + w {
            set.insert(ZoneBand::Low1);
        } else if y > lo - w && y <= lo {
            set.insert(ZoneBand::Low2);
        }
    }

    if y > lo && y < hi {
        // in-course is the negative-x side for a right-handed batter
        let u = match hand {
            BatterHand::Right => x,
            BatterHand::Left => -x,
        };
        if u > -xh && u <= -xh + w {
            set.insert(ZoneBand::In1);
        } else if u > -xh - w && u <= -xh {
            set.insert(ZoneBand::In2);
        }
        if u >= xh - w && u < xh {
            set.insert(ZoneBand::Out1);
        } else if u >= xh && u < xh + w {
            set.insert(ZoneBand::Out2);
        }
    }
    set
}
