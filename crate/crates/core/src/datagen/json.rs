//! String-only JSON objects.
//!
//! Grammar of the normal language:
//!
//! ```text
//! object := '{' [ entry { ',' entry } ] '}'      at most 4 entries, nesting depth <= 4
//! entry  := string ':' ( string | object )
//! string := '"' [a-z]{1,10} '"'
//! ```
//!
//! No whitespace anywhere.

use crate::error::{Error, Result};
use crate::numeric::RngStream;

use super::Kind;

pub const MAX_DEPTH: usize = 4;
pub const MAX_ENTRIES: usize = 4;
pub const NEST_PROBABILITY: f64 = 0.2;
pub const MAX_STRING_LEN: usize = 10;

fn gen_string(rng: &mut RngStream, out: &mut Vec<u8>) {
    let len = 1 + rng.index(MAX_STRING_LEN);
    out.push(b'"');
    for _ in 0..len {
        out.push(b'a' + rng.index(26) as u8);
    }
    out.push(b'"');
}

fn gen_object(rng: &mut RngStream, depth: usize, out: &mut Vec<u8>) {
    out.push(b'{');
    let entries = rng.index(MAX_ENTRIES + 1);
    for e in 0..entries {
        if e > 0 {
            out.push(b',');
        }
        gen_string(rng, out);
        out.push(b':');
        if depth < MAX_DEPTH && rng.bernoulli(NEST_PROBABILITY) {
            gen_object(rng, depth + 1, out);
        } else {
            gen_string(rng, out);
        }
    }
    out.push(b'}');
}

pub fn gen_json(rng: &mut RngStream) -> Vec<u8> {
    let mut out = Vec::new();
    gen_object(rng, 1, &mut out);
    out
}

fn positions_of(bytes: &[u8], pred: impl Fn(u8) -> bool) -> Vec<usize> {
    bytes
        .iter()
        .enumerate()
        .filter(|(_, &b)| pred(b))
        .map(|(i, _)| i)
        .collect()
}

/// Deletes one occurrence of a token or inserts `token()` at a uniform position.
fn delete_or_insert(
    rng: &mut RngStream,
    mut bytes: Vec<u8>,
    is_token: impl Fn(u8) -> bool,
    token: impl FnOnce(&mut RngStream) -> u8,
) -> Vec<u8> {
    let found = positions_of(&bytes, is_token);
    if rng.index(2) == 0 {
        let at = found[rng.index(found.len())];
        bytes.remove(at);
    } else {
        let at = rng.index(bytes.len() + 1);
        let t = token(rng);
        bytes.insert(at, t);
    }
    bytes
}

fn corrupt(rng: &mut RngStream, kind: Kind, base: Vec<u8>) -> Vec<u8> {
    match kind {
        Kind::Colon => {
            let mut bytes = base;
            let colons = positions_of(&bytes, |b| b == b':');
            let at = colons[rng.index(colons.len())];
            match rng.index(3) {
                0 => {
                    bytes.remove(at);
                    // any insertion point other than the original one
                    let mut to = rng.index(bytes.len());
                    if to >= at {
                        to += 1;
                    }
                    bytes.insert(to, b':');
                }
                1 => {
                    bytes.remove(at);
                }
                _ => bytes.insert(at, b':'),
            }
            bytes
        }
        Kind::Comma => delete_or_insert(rng, base, |b| b == b',', |_| b','),
        Kind::Quote => delete_or_insert(rng, base, |b| b == b'"', |_| b'"'),
        Kind::Nesting => delete_or_insert(
            rng,
            base,
            |b| b == b'{' || b == b'}',
            |r| if r.index(2) == 0 { b'{' } else { b'}' },
        ),
        _ => unreachable!("checked by caller"),
    }
}

pub fn gen_json_anomaly(rng: &mut RngStream, kind: Kind) -> Result<Vec<u8>> {
    let token: fn(u8) -> bool = match kind {
        Kind::Colon => |b| b == b':',
        Kind::Comma => |b| b == b',',
        Kind::Quote => |b| b == b'"',
        Kind::Nesting => |b| b == b'{' || b == b'}',
        other => {
            return Err(Error::contract(format!(
                "{other:?} is not a JSON anomaly class"
            )))
        }
    };
    loop {
        let base = gen_json(rng);
        if !base.iter().any(|&b| token(b)) {
            continue;
        }
        let candidate = corrupt(rng, kind, base);
        if !is_valid_json(&candidate) {
            return Ok(candidate);
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn eat(&mut self, b: u8) -> bool {
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn string(&mut self) -> bool {
        if !self.eat(b'"') {
            return false;
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_lowercase) {
            self.pos += 1;
        }
        let len = self.pos - start;
        (1..=MAX_STRING_LEN).contains(&len) && self.eat(b'"')
    }

    fn object(&mut self, depth: usize) -> bool {
        if depth > MAX_DEPTH || !self.eat(b'{') {
            return false;
        }
        if self.eat(b'}') {
            return true;
        }
        let mut entries = 0;
        loop {
            entries += 1;
            if entries > MAX_ENTRIES || !self.string() || !self.eat(b':') {
                return false;
            }
            let value_ok = match self.bytes.get(self.pos) {
                Some(b'{') => self.object(depth + 1),
                _ => self.string(),
            };
            if !value_ok {
                return false;
            }
            if self.eat(b'}') {
                return true;
            }
            if !self.eat(b',') {
                return false;
            }
        }
    }
}

/// Membership in the normal JSON language described at the top of this module.
pub fn is_valid_json(bytes: &[u8]) -> bool {
    let mut p = Parser { bytes, pos: 0 };
    p.object(1) && p.pos == bytes.len()
}

/// Deepest brace nesting in `bytes` (ignores balance).
pub fn brace_depth(bytes: &[u8]) -> usize {
    let mut depth = 0i64;
    let mut max = 0i64;
    for &b in bytes {
        match b {
            b'{' => {
                depth += 1;
                max = max.max(depth);
            }
            b'}' => depth -= 1,
            _ => {}
        }
    }
    max as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validator_cases() {
        for ok in [
            "{}",
            r#"{"a":"b"}"#,
            r#"{"a":"b","c":{"d":{}}}"#,
            r#"{"a":{"b":{"c":{"d":"e"}}}}"#,
        ] {
            assert!(is_valid_json(ok.as_bytes()), "{ok}");
        }
        for bad in [
            "",
            "{",
            r#"{"a":"b""c":"d"}"#,
            r#"{"a""b"}"#,
            r#"{"a":"b",}"#,
            r#"{"a":b"}"#,
            r#"{"A":"b"}"#,
            r#"{"a":"b"}}"#,
            r#"{"a":{"b":{"c":{"d":{}}}}}"#,
            r#"{"abcdefghijk":"b"}"#,
            r#"{"a":"b","c":"d","e":"f","g":"h","i":"j"}"#,
            r#"{"a":"b"} "#,
        ] {
            assert!(!is_valid_json(bad.as_bytes()), "{bad}");
        }
    }

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = RngStream::new(10);
        for _ in 0..10_000 {
            let j = gen_json(&mut rng);
            assert!(is_valid_json(&j), "{}", String::from_utf8_lossy(&j));
            assert!(brace_depth(&j) <= MAX_DEPTH);
            assert!(!j.contains(&b' '));
        }
    }

    #[test]
    fn empty_object_frequency() {
        let mut rng = RngStream::new(11);
        let n = 20_000;
        let empty = (0..n).filter(|_| gen_json(&mut rng) == b"{}").count() as f64;
        let p = 0.2;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((empty - n as f64 * p).abs() < 4.0 * sigma, "{empty}");
    }

    #[test]
    fn anomalies_fail_the_validator() {
        let mut rng = RngStream::new(12);
        for kind in [Kind::Colon, Kind::Comma, Kind::Quote, Kind::Nesting] {
            for _ in 0..2000 {
                let a = gen_json_anomaly(&mut rng, kind).unwrap();
                assert!(
                    !is_valid_json(&a),
                    "{kind:?}: {}",
                    String::from_utf8_lossy(&a)
                );
            }
        }
    }

    #[test]
    fn nesting_anomalies_break_braces() {
        let mut rng = RngStream::new(13);
        for _ in 0..1000 {
            let a = gen_json_anomaly(&mut rng, Kind::Nesting).unwrap();
            let open = a.iter().filter(|&&b| b == b'{').count();
            let close = a.iter().filter(|&&b| b == b'}').count();
            let inside_string = {
                let mut quoted = false;
                let mut hit = false;
                for &b in &a {
                    match b {
                        b'"' => quoted = !quoted,
                        b'{' | b'}' if quoted => hit = true,
                        _ => {}
                    }
                }
                hit
            };
            assert!(
                open != close || inside_string,
                "{}",
                String::from_utf8_lossy(&a)
            );
        }
    }

    #[test]
    fn comma_deletion_example() {
        let mut bytes = br#"{"a":"b","c":"d"}"#.to_vec();
        let at = bytes.iter().position(|&b| b == b',').unwrap();
        bytes.remove(at);
        assert_eq!(bytes, br#"{"a":"b""c":"d"}"#);
        assert!(!is_valid_json(&bytes));
    }

    #[test]
    fn wrong_family_kind_rejected() {
        let mut rng = RngStream::new(14);
        assert!(gen_json_anomaly(&mut rng, Kind::Digit).is_err());
    }
}
