use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::utility::Utility;

/// Which pattern family to mine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// High-utility patterns; support is ignored.
    Husp,
    /// High-utility patterns meeting the support threshold.
    Fhusp,
    /// Frequent high-utility patterns with no equal-support frequent
    /// high-utility proper super-pattern.
    Chusp,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Husp, Mode::Fhusp, Mode::Chusp];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Husp => "husp",
            Mode::Fhusp => "fhusp",
            Mode::Chusp => "chusp",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "husp" => Ok(Mode::Husp),
            "fhusp" => Ok(Mode::Fhusp),
            "chusp" => Ok(Mode::Chusp),
            other => Err(Error::InvalidParams(format!("unknown mode '{other}' (husp|fhusp|chusp)"))),
        }
    }
}

/// Minimum support, either a fraction of the database or a sequence count.
///
/// Ratios are held exactly in millionths so that resolution never suffers
/// from binary rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinSup {
    Ratio { ppm: u64 },
    Absolute(usize),
}

impl MinSup {
    const PPM: u64 = 1_000_000;

    /// Rounds to the nearest millionth.
    pub fn ratio(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0 && r <= 1.0) {
            return Err(Error::InvalidParams(format!("support ratio {r} outside (0, 1]")));
        }
        let ppm = (r * Self::PPM as f64).round() as u64;
        Self::from_ppm(ppm)
    }

    fn from_ppm(ppm: u64) -> Result<Self> {
        if ppm == 0 || ppm > Self::PPM {
            return Err(Error::InvalidParams("support ratio outside (0, 1]".into()));
        }
        Ok(MinSup::Ratio { ppm })
    }
}

impl Default for MinSup {
    fn default() -> Self {
        MinSup::Absolute(1)
    }
}

impl fmt::Display for MinSup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MinSup::Absolute(k) => write!(f, "{k}a"),
            MinSup::Ratio { ppm } => {
                let whole = ppm / Self::PPM;
                let frac = ppm % Self::PPM;
                if frac == 0 {
                    write!(f, "{whole}")
                } else {
                    let digits = format!("{frac:06}");
                    write!(f, "{whole}.{}", digits.trim_end_matches('0'))
                }
            }
        }
    }
}

/// Accepts `0.5` (ratio) or `3a` (absolute count).
impl FromStr for MinSup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("bad min support '{s}': use a ratio like 0.5 or a count like 3a"));
        if let Some(count) = s.strip_suffix('a') {
            let k: usize = count.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(Error::InvalidParams("absolute min support must be at least 1".into()));
            }
            return Ok(MinSup::Absolute(k));
        }
        // ratios share the fixed-point decimal grammar of utilities
        let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if whole.is_empty() || !digits(whole) || !digits(frac) || frac.len() > 6 || (s.contains('.') && frac.is_empty()) {
            return Err(bad());
        }
        let whole: u64 = whole.parse().map_err(|_| bad())?;
        let frac_ppm: u64 = if frac.is_empty() {
            0
        } else {
            format!("{frac:0<6}").parse().map_err(|_| bad())?
        };
        let ppm = whole
            .checked_mul(Self::PPM)
            .and_then(|w| w.checked_add(frac_ppm))
            .ok_or_else(bad)?;
        Self::from_ppm(ppm)
    }
}

/// Resolves a threshold against a database of `n` sequences: a ratio `r`
/// becomes `max(1, floor(r * n))`, an absolute count is kept.
pub fn resolve_min_sup(min_sup: MinSup, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParams("database is empty".into()));
    }
    match min_sup {
        MinSup::Absolute(0) => Err(Error::InvalidParams("absolute min support must be at least 1".into())),
        MinSup::Absolute(k) => Ok(k),
        MinSup::Ratio { ppm } => {
            if ppm == 0 || ppm > MinSup::PPM {
                return Err(Error::InvalidParams("support ratio outside (0, 1]".into()));
            }
            let k = (u128::from(ppm) * n as u128 / u128::from(MinSup::PPM)) as usize;
            Ok(k.max(1))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningParams {
    pub min_util: Utility,
    pub min_sup: MinSup,
    /// Cap on pattern length (total item count); `None` is unlimited.
    pub max_length: Option<usize>,
    pub mode: Mode,
}

impl MiningParams {
    pub fn new(mode: Mode, min_util: Utility) -> Self {
        MiningParams {
            min_util,
            min_sup: MinSup::default(),
            max_length: None,
            mode,
        }
    }

    pub fn with_min_sup(mut self, min_sup: MinSup) -> Self {
        self.min_sup = min_sup;
        self
    }

    pub fn with_max_length(mut self, max_length: Option<usize>) -> Self {
        self.max_length = max_length;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_length == Some(0) {
            return Err(Error::InvalidParams("max length must be at least 1".into()));
        }
        if let MinSup::Absolute(0) = self.min_sup {
            return Err(Error::InvalidParams("absolute min support must be at least 1".into()));
        }
        Ok(())
    }
}
