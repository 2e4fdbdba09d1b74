//! Fixed-point number formats `uW.F` / `sW.F` (two's complement).

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;
use num_traits::Float;

use crate::error::{input, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Rounding {
    /// Round half away from zero.
    #[default]
    Nearest,
    Floor,
}

/// `W` total bits, `F` fraction bits, `I = W − F` integer bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointFormat {
    width: u32,
    frac: u32,
    signed: bool,
    rounding: Rounding,
}

impl FixedPointFormat {
    pub fn new(width: u32, frac: u32, signed: bool, rounding: Rounding) -> Result<Self> {
        if width == 0 || width > 64 {
            return input(format!("format width {width} outside 1..=64"));
        }
        if frac >= width {
            return input(format!("fraction bits {frac} must be below width {width}"));
        }
        Ok(FixedPointFormat { width, frac, signed, rounding })
    }

    pub fn with_rounding(mut self, rounding: Rounding) -> Self {
        self.rounding = rounding;
        self
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn frac(&self) -> u32 {
        self.frac
    }

    pub fn int_bits(&self) -> u32 {
        self.width - self.frac
    }

    pub fn signed(&self) -> bool {
        self.signed
    }

    pub fn rounding(&self) -> Rounding {
        self.rounding
    }

    pub fn ulp(&self) -> f64 {
        pow2(-(self.frac as i32))
    }

    fn code_range(&self) -> (f64, f64) {
        if self.signed {
            (-pow2(self.width as i32 - 1), pow2(self.width as i32 - 1) - 1.0)
        } else {
            (0.0, pow2(self.width as i32) - 1.0)
        }
    }

    /// `[0, 2^I − 2^−F]` unsigned, `[−2^(I−1), 2^(I−1) − 2^−F]` signed.
    pub fn dynamic_range(&self) -> (f64, f64) {
        let (lo, hi) = self.code_range();
        (lo * self.ulp(), hi * self.ulp())
    }

    /// Nearest representable value; out-of-range inputs saturate, NaN maps to 0.
    pub fn quantize(&self, x: f64) -> f64 {
        if x.is_nan() {
            return 0.0;
        }
        let scaled = x * pow2(self.frac as i32);
        let code = match self.rounding {
            Rounding::Nearest => Float::round(scaled),
            Rounding::Floor => Float::floor(scaled),
        };
        let (lo, hi) = self.code_range();
        code.max(lo).min(hi) * self.ulp()
    }
}

fn pow2(e: i32) -> f64 {
    Float::powi(2.0f64, e)
}

impl fmt::Display for FixedPointFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}.{}", if self.signed { 's' } else { 'u' }, self.width, self.frac)
    }
}

impl FromStr for FixedPointFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("malformed fixed-point format {s:?} (expected uW.F or sW.F)"));
        let mut chars = s.trim().chars();
        let signed = match chars.next() {
            Some('s') | Some('S') => true,
            Some('u') | Some('U') => false,
            _ => return Err(bad()),
        };
        let rest: String = chars.collect();
        let (w, f) = rest.split_once('.').ok_or_else(bad)?;
        let width = w.parse::<u32>().map_err(|_| bad())?;
        let frac = f.parse::<u32>().map_err(|_| bad())?;
        FixedPointFormat::new(width, frac, signed, Rounding::Nearest)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for FixedPointFormat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for FixedPointFormat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
