//! Millisecond timecodes and their textual forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const MS_PER_SECOND: u64 = 1_000;
const MS_PER_MINUTE: u64 = 60 * MS_PER_SECOND;
const MS_PER_HOUR: u64 = 60 * MS_PER_MINUTE;

/// A point on the media time axis, in whole milliseconds from media start.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timecode(u64);

impl Timecode {
    pub const ZERO: Timecode = Timecode(0);

    pub const fn from_millis(ms: u64) -> Self {
        Timecode(ms)
    }

    pub const fn millis(self) -> u64 {
        self.0
    }
}

impl From<u64> for Timecode {
    fn from(ms: u64) -> Self {
        Timecode(ms)
    }
}

impl fmt::Display for Timecode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_timecode(*self))
    }
}

impl FromStr for Timecode {
    type Err = TimecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_timecode(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid timecode {input:?}: {reason}")]
pub struct TimecodeError {
    pub input: String,
    pub reason: &'static str,
}

fn fail(input: &str, reason: &'static str) -> TimecodeError {
    TimecodeError {
        input: input.to_owned(),
        reason,
    }
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses either a plain millisecond count (`"90000"`) or a clock form
/// (`"HH:MM:SS"` / `"HH:MM:SS.mmm"`). Hours take two or more digits.
pub fn parse_timecode(s: &str) -> Result<Timecode, TimecodeError> {
    if s.is_empty() {
        return Err(fail(s, "empty"));
    }
    if !s.contains(':') {
        if !all_digits(s) {
            return Err(fail(s, "expected a non-negative integer or HH:MM:SS[.mmm]"));
        }
        return s
            .parse::<u64>()
            .map(Timecode)
            .map_err(|_| fail(s, "value out of range"));
    }

    let (clock, millis) = match s.split_once('.') {
        Some((clock, frac)) => {
            if frac.len() != 3 || !all_digits(frac) {
                return Err(fail(s, "milliseconds must be exactly 3 digits"));
            }
            (clock, frac.parse::<u64>().expect("three digits"))
        }
        None => (s, 0),
    };

    let mut parts = clock.split(':');
    let (Some(hh), Some(mm), Some(ss), None) = (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(fail(s, "expected HH:MM:SS[.mmm]"));
    };
    if hh.len() < 2 || !all_digits(hh) {
        return Err(fail(s, "hours must be at least 2 digits"));
    }
    if mm.len() != 2 || !all_digits(mm) || ss.len() != 2 || !all_digits(ss) {
        return Err(fail(s, "minutes and seconds must be exactly 2 digits"));
    }
    let minutes: u64 = mm.parse().expect("two digits");
    let seconds: u64 = ss.parse().expect("two digits");
    if minutes >= 60 {
        return Err(fail(s, "minutes must be in 00-59"));
    }
    if seconds >= 60 {
        return Err(fail(s, "seconds must be in 00-59"));
    }
    let hours: u64 = hh.parse().map_err(|_| fail(s, "value out of range"))?;

    hours
        .checked_mul(MS_PER_HOUR)
        .and_then(|ms| ms.checked_add(minutes * MS_PER_MINUTE + seconds * MS_PER_SECOND + millis))
        .map(Timecode)
        .ok_or_else(|| fail(s, "value out of range"))
}

/// Canonical clock form: `HH:MM:SS`, with `.mmm` appended only when the
/// millisecond part is nonzero. Hours never wrap.
pub fn format_timecode(t: Timecode) -> String {
    let ms = t.0;
    let hours = ms / MS_PER_HOUR;
    let minutes = (ms % MS_PER_HOUR) / MS_PER_MINUTE;
    let seconds = (ms % MS_PER_MINUTE) / MS_PER_SECOND;
    let millis = ms % MS_PER_SECOND;
    if millis == 0 {
        format!("{hours:02}:{minutes:02}:{seconds:02}")
    } else {
        format!("{hours:02}:{minutes:02}:{seconds:02}.{millis:03}")
    }
}
