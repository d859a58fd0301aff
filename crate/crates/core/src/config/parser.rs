use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use super::{ColorRule, LabelMode, TimelineConfig, TrackHeight, TrackSelection};
use crate::color::{named_color, ColorSpec, Rgb};
use crate::model::is_token;
use crate::timecode::{parse_timecode, Timecode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigErrorKind {
    Syntax,
    DuplicateKey(String),
    UnknownKey(String),
}

/// A configuration error located at a character offset of the decoded
/// configuration text (`input`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub kind: ConfigErrorKind,
    pub position: usize,
    pub expected: String,
    pub found: String,
    /// The decoded configuration text that `position` indexes into.
    pub input: String,
}

impl ConfigError {
    pub fn code(&self) -> &'static str {
        match self.kind {
            ConfigErrorKind::Syntax => "parse_error",
            ConfigErrorKind::DuplicateKey(_) => "duplicate_key",
            ConfigErrorKind::UnknownKey(_) => "unknown_key",
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ConfigErrorKind::Syntax => write!(
                f,
                "at position {}: expected {}, found {}",
                self.position,
                quote_symbol(&self.expected),
                if self.found == END {
                    END.to_owned()
                } else {
                    format!("{:?}", self.found)
                }
            ),
            ConfigErrorKind::DuplicateKey(key) => {
                write!(f, "at position {}: duplicate key {key:?}", self.position)
            }
            ConfigErrorKind::UnknownKey(key) => write!(
                f,
                "at position {}: unknown key {key:?} (expected {})",
                self.position, self.expected
            ),
        }
    }
}

/// Quotes bare punctuation such as `,` so it reads as a literal.
fn quote_symbol(s: &str) -> String {
    if s.chars().any(char::is_alphabetic) {
        s.to_owned()
    } else {
        format!("{s:?}")
    }
}

const KEYS: [&str; 7] = ["tracks", "from", "to", "color", "height", "bin", "label"];
const END: &str = "end of input";

/// One `key=value` parameter after percent-decoding its value.
struct Param<'a> {
    key: &'a str,
    /// Character offset of the key in the decoded text.
    start: usize,
    has_eq: bool,
    value: Vec<char>,
    /// Character offset of the value in the decoded text.
    value_start: usize,
    /// First position inside the value whose raw encoding was invalid.
    decode_error: Option<usize>,
}

/// Percent-decodes one parameter value. Malformed escapes are kept
/// literally and their offset reported.
fn percent_decode(raw: &str) -> (String, Option<usize>) {
    let bytes = raw.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut bad_escape = None;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b == b'%' {
            let hex = bytes.get(i + 1..i + 3).and_then(|h| {
                let h = std::str::from_utf8(h).ok()?;
                u8::from_str_radix(h, 16)
                    .ok()
                    .filter(|_| h.bytes().all(|c| c.is_ascii_hexdigit()))
            });
            if let Some(byte) = hex {
                out.push(byte);
                i += 3;
                continue;
            }
            if bad_escape.is_none() {
                bad_escape = Some(String::from_utf8_lossy(&out).chars().count());
            }
        }
        out.push(b);
        i += 1;
    }
    match String::from_utf8(out) {
        Ok(s) => (s, bad_escape),
        Err(e) => {
            let valid = e.utf8_error().valid_up_to();
            let bytes = e.into_bytes();
            let utf8_at = String::from_utf8_lossy(&bytes[..valid]).chars().count();
            let first = bad_escape.map_or(utf8_at, |p| p.min(utf8_at));
            (String::from_utf8_lossy(&bytes).into_owned(), Some(first))
        }
    }
}

fn split_params(raw: &str) -> (Vec<Param<'_>>, String) {
    let mut params = Vec::new();
    let mut decoded = String::new();
    let mut pos = 0;
    for (i, part) in raw.split('&').enumerate() {
        if i > 0 {
            decoded.push('&');
            pos += 1;
        }
        let (key, raw_value, has_eq) = match part.split_once('=') {
            Some((k, v)) => (k, v, true),
            None => (part, "", false),
        };
        let start = pos;
        decoded.push_str(key);
        pos += key.chars().count();
        if has_eq {
            decoded.push('=');
            pos += 1;
        }
        let (value, decode_error) = percent_decode(raw_value);
        let value: Vec<char> = value.chars().collect();
        decoded.extend(value.iter());
        params.push(Param {
            key,
            start,
            has_eq,
            value_start: pos,
            decode_error: decode_error.map(|p| pos + p),
            value,
        });
        pos += params.last().expect("just pushed").value.len();
    }
    (params, decoded)
}

/// Parses a configuration string. Each parameter value is percent-decoded
/// before the grammar is applied; error positions refer to the decoded text.
pub fn parse_config(raw: &str) -> Result<TimelineConfig, ConfigError> {
    let mut config = TimelineConfig::default();
    if raw.is_empty() {
        return Ok(config);
    }
    let (params, decoded) = split_params(raw);
    let text: Vec<char> = decoded.chars().collect();
    let error_at = |kind: ConfigErrorKind, position: usize, expected: &str| ConfigError {
        kind,
        position,
        expected: expected.to_owned(),
        found: text.get(position).map_or_else(|| END.to_owned(), char::to_string),
        input: decoded.clone(),
    };

    let mut seen = HashSet::new();
    let mut from_at = None;
    let mut to_at = None;
    for param in &params {
        if param.key.is_empty() {
            return Err(error_at(ConfigErrorKind::Syntax, param.start, "parameter name"));
        }
        if !KEYS.contains(&param.key) {
            let mut err = error_at(
                ConfigErrorKind::UnknownKey(param.key.to_owned()),
                param.start,
                "one of tracks, from, to, color, height, bin, label",
            );
            err.found = param.key.to_owned();
            return Err(err);
        }
        if !seen.insert(param.key) {
            let mut err = error_at(
                ConfigErrorKind::DuplicateKey(param.key.to_owned()),
                param.start,
                "each key at most once",
            );
            err.found = param.key.to_owned();
            return Err(err);
        }
        if !param.has_eq {
            return Err(error_at(
                ConfigErrorKind::Syntax,
                param.start + param.key.chars().count(),
                "=",
            ));
        }

        let mut cursor = Cursor {
            chars: &param.value,
            index: 0,
            base: param.value_start,
        };
        let result = match param.key {
            "tracks" => cursor.tracks().map(|t| config.tracks = t),
            "from" => cursor.timecode().map(|t| {
                config.from = Some(t);
                from_at = Some(param.value_start);
            }),
            "to" => cursor.timecode().map(|t| {
                config.to = Some(t);
                to_at = Some(param.value_start);
            }),
            "color" => cursor.color_rules().map(|r| config.color_rules = r),
            "height" => cursor
                .keyword(&[
                    ("compact", TrackHeight::Compact),
                    ("normal", TrackHeight::Normal),
                    ("large", TrackHeight::Large),
                ])
                .map(|h| config.height = h),
            "bin" => cursor.positive_integer().map(|n| config.bin_threshold = n),
            "label" => cursor
                .keyword(&[("none", LabelMode::None), ("inline", LabelMode::Inline)])
                .map(|m| config.label_mode = m),
            _ => unreachable!("key checked against KEYS"),
        };
        match result {
            Ok(()) => {
                if let Some(at) = param.decode_error {
                    return Err(error_at(ConfigErrorKind::Syntax, at, "valid percent-encoding"));
                }
            }
            Err((at, expected)) => {
                let expected = match param.decode_error {
                    Some(bad) if bad <= at => {
                        return Err(error_at(ConfigErrorKind::Syntax, bad, "valid percent-encoding"))
                    }
                    _ => expected,
                };
                return Err(error_at(ConfigErrorKind::Syntax, at, &expected));
            }
        }
    }

    if let (Some(from), Some(to)) = (config.from, config.to) {
        if from >= to {
            let later = from_at.max(to_at).expect("both present");
            return Err(error_at(ConfigErrorKind::Syntax, later, "window with from < to"));
        }
    }
    Ok(config)
}

/// Recursive-descent scanner over one decoded value. Errors carry the
/// absolute position and a description of what was expected.
struct Cursor<'a> {
    chars: &'a [char],
    index: usize,
    base: usize,
}

type Scan<T> = Result<T, (usize, String)>;

fn is_token_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '-' || c == '_'
}

impl Cursor<'_> {
    fn pos(&self) -> usize {
        self.base + self.index
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.index).copied()
    }

    fn at_end(&self) -> bool {
        self.index >= self.chars.len()
    }

    fn fail<T>(&self, expected: &str) -> Scan<T> {
        Err((self.pos(), expected.to_owned()))
    }

    fn fail_at<T>(&self, index: usize, expected: &str) -> Scan<T> {
        Err((self.base + index, expected.to_owned()))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.index += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Scan<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&c.to_string())
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.index;
        while self.peek().is_some_and(&pred) {
            self.index += 1;
        }
        self.chars[start..self.index].iter().collect()
    }

    fn end(&self) -> Scan<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.fail("end of value")
        }
    }

    fn token(&mut self, what: &str) -> Scan<String> {
        let token = self.take_while(is_token_char);
        if token.is_empty() {
            return self.fail(what);
        }
        debug_assert!(is_token(&token));
        Ok(token)
    }

    fn tracks(&mut self) -> Scan<TrackSelection> {
        if self.eat('*') {
            self.end()?;
            return Ok(TrackSelection::Wildcard);
        }
        let mut tracks: Vec<String> = Vec::new();
        loop {
            let start = self.index;
            let token = self.token("track id")?;
            if tracks.contains(&token) {
                return self.fail_at(start, "distinct track id");
            }
            tracks.push(token);
            if self.at_end() {
                return Ok(TrackSelection::List(tracks));
            }
            if !self.eat(',') {
                return self.fail("\",\" or end of value");
            }
        }
    }

    fn timecode(&mut self) -> Scan<Timecode> {
        let text: String = self.chars.iter().collect();
        parse_timecode(&text)
            .map_err(|_| (self.pos(), "timecode (milliseconds or HH:MM:SS[.mmm])".to_owned()))
    }

    fn positive_integer(&mut self) -> Scan<u32> {
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return self.fail_at(0, "positive integer");
        }
        self.end()?;
        match digits.parse::<u32>() {
            Ok(n) if n > 0 => Ok(n),
            _ => self.fail_at(0, "positive integer"),
        }
    }

    fn keyword<T: Copy>(&mut self, options: &[(&str, T)]) -> Scan<T> {
        let word = self.take_while(|c| c.is_ascii_alphabetic());
        let expected = options.iter().map(|(w, _)| *w).collect::<Vec<_>>().join(" or ");
        match options.iter().find(|(w, _)| *w == word) {
            Some(&(_, value)) => {
                self.end()?;
                Ok(value)
            }
            None => self.fail_at(0, &expected),
        }
    }

    fn color_rules(&mut self) -> Scan<Vec<ColorRule>> {
        let mut rules: Vec<ColorRule> = Vec::new();
        loop {
            let start = self.index;
            let type_id = self.token("track id")?;
            if rules.iter().any(|r| r.type_id == type_id) {
                return self.fail_at(start, "at most one rule per track");
            }
            self.expect(':')?;
            let spec = self.color_spec()?;
            rules.push(ColorRule { type_id, spec });
            if self.at_end() {
                return Ok(rules);
            }
            if !self.eat(';') {
                return self.fail("\";\" or end of value");
            }
        }
    }

    fn color_spec(&mut self) -> Scan<ColorSpec> {
        let start = self.index;
        let word = self.take_while(|c| c.is_ascii_alphabetic());
        match word.as_str() {
            "fixed" => {
                self.expect('(')?;
                let color = self.color()?;
                self.expect(')')?;
                Ok(ColorSpec::Fixed(color))
            }
            "map" => {
                self.expect('(')?;
                let mut entries = BTreeMap::new();
                let mut wildcard = None;
                loop {
                    let entry_start = self.index;
                    if self.eat('*') {
                        if wildcard.is_some() {
                            return self.fail_at(entry_start, "at most one wildcard entry");
                        }
                        self.expect('=')?;
                        wildcard = Some(self.color()?);
                    } else {
                        let token = self.token("map entry (token or *)")?;
                        if entries.contains_key(&token) {
                            return self.fail_at(entry_start, "distinct map entry");
                        }
                        self.expect('=')?;
                        entries.insert(token, self.color()?);
                    }
                    if self.eat(')') {
                        return Ok(ColorSpec::Map { entries, wildcard });
                    }
                    if !self.eat(',') {
                        return self.fail("\",\" or \")\"");
                    }
                }
            }
            "scale" => {
                self.expect('(')?;
                let low = self.color()?;
                self.expect(',')?;
                let high = self.color()?;
                if self.eat(')') {
                    return Ok(ColorSpec::Scale {
                        low,
                        high,
                        domain: None,
                    });
                }
                if !self.eat(',') {
                    return self.fail("\",\" or \")\"");
                }
                let min_at = self.index;
                let min = self.real()?;
                self.expect(',')?;
                let max = self.real()?;
                self.expect(')')?;
                if min.partial_cmp(&max) != Some(std::cmp::Ordering::Less) {
                    return self.fail_at(min_at, "scale domain with min < max");
                }
                Ok(ColorSpec::Scale {
                    low,
                    high,
                    domain: Some((min + 0.0, max + 0.0)),
                })
            }
            "hash" => Ok(ColorSpec::Hash),
            _ => self.fail_at(start, "fixed(, map(, scale( or hash"),
        }
    }

    fn color(&mut self) -> Scan<Rgb> {
        let start = self.index;
        if self.eat('#') {
            let mut digits = Vec::with_capacity(6);
            while digits.len() < 6 {
                match self.peek().and_then(|c| c.to_digit(16)) {
                    Some(d) => {
                        digits.push(d as u8);
                        self.index += 1;
                    }
                    None => break,
                }
            }
            return match *digits.as_slice() {
                [r, g, b] => Ok(Rgb::new(r * 17, g * 17, b * 17)),
                [r1, r2, g1, g2, b1, b2] => Ok(Rgb::new(r1 * 16 + r2, g1 * 16 + g2, b1 * 16 + b2)),
                _ => self.fail("hex digit"),
            };
        }
        let name = self.take_while(|c| c.is_ascii_alphabetic());
        named_color(&name).map_or_else(
            || self.fail_at(start, "color (#rgb, #rrggbb or a color name)"),
            Ok,
        )
    }

    fn real(&mut self) -> Scan<f64> {
        let start = self.index;
        self.eat('-');
        if self.take_while(|c| c.is_ascii_digit()).is_empty() {
            return self.fail("digit");
        }
        if self.eat('.') && self.take_while(|c| c.is_ascii_digit()).is_empty() {
            return self.fail("digit");
        }
        let text: String = self.chars[start..self.index].iter().collect();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => self.fail_at(start, "finite number"),
        }
    }
}
