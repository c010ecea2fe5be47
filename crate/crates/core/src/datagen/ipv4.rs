use crate::error::{Error, Result};
use crate::numeric::RngStream;

use super::Kind;

fn push_group(out: &mut Vec<u8>, value: i64) {
    out.extend_from_slice(value.to_string().as_bytes());
}

fn render(groups: &[i64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(groups.len() * 4);
    for (i, &g) in groups.iter().enumerate() {
        if i > 0 {
            out.push(b'.');
        }
        push_group(&mut out, g);
    }
    out
}

fn random_groups(rng: &mut RngStream, count: usize) -> Vec<i64> {
    (0..count)
        .map(|_| rng.uniform_int(0, 255).expect("valid range"))
        .collect()
}

/// Four uniform octets in canonical dotted decimal.
pub fn gen_ipv4(rng: &mut RngStream) -> Vec<u8> {
    render(&random_groups(rng, 4))
}

/// Printable ASCII other than digits and `.`.
fn foreign_bytes() -> Vec<u8> {
    (0x20u8..=0x7e)
        .filter(|b| !b.is_ascii_digit() && *b != b'.')
        .collect()
}

pub fn gen_ipv4_anomaly(rng: &mut RngStream, kind: Kind) -> Result<Vec<u8>> {
    loop {
        let candidate = match kind {
            Kind::Trivial => {
                let mut addr = gen_ipv4(rng);
                let alphabet = foreign_bytes();
                let pos = rng.index(addr.len());
                addr[pos] = alphabet[rng.index(alphabet.len())];
                addr
            }
            Kind::Length => {
                const COUNTS: [usize; 7] = [1, 2, 3, 5, 6, 7, 8];
                let count = COUNTS[rng.index(COUNTS.len())];
                render(&random_groups(rng, count))
            }
            Kind::Digit => {
                let mut groups = random_groups(rng, 4);
                let idx = rng.index(4);
                groups[idx] = rng.uniform_int(256, 999)?;
                render(&groups)
            }
            Kind::Dot => {
                let mut addr = gen_ipv4(rng);
                match rng.index(3) {
                    0 => {
                        let dots: Vec<usize> = addr
                            .iter()
                            .enumerate()
                            .filter(|(_, &b)| b == b'.')
                            .map(|(i, _)| i)
                            .collect();
                        let at = dots[rng.index(dots.len())];
                        addr.insert(at, b'.');
                    }
                    1 => addr.insert(0, b'.'),
                    _ => addr.push(b'.'),
                }
                addr
            }
            other => {
                return Err(Error::contract(format!(
                    "{other:?} is not an IPv4 anomaly class"
                )))
            }
        };
        if !is_valid_ipv4(&candidate) {
            return Ok(candidate);
        }
    }
}

/// Exactly four dot-separated canonical decimal groups, each at most 255.
pub fn is_valid_ipv4(bytes: &[u8]) -> bool {
    let groups: Vec<&[u8]> = bytes.split(|&b| b == b'.').collect();
    groups.len() == 4
        && groups.iter().all(|g| {
            !g.is_empty()
                && g.len() <= 3
                && g.iter().all(u8::is_ascii_digit)
                && (g.len() == 1 || g[0] != b'0')
                && g.iter().fold(0u32, |acc, &d| acc * 10 + (d - b'0') as u32) <= 255
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(bytes: &[u8]) -> Vec<&[u8]> {
        bytes.split(|&b| b == b'.').collect()
    }

    #[test]
    fn validator_cases() {
        for ok in ["0.0.0.0", "255.255.255.255", "10.1.200.7"] {
            assert!(is_valid_ipv4(ok.as_bytes()), "{ok}");
        }
        for bad in [
            "",
            "1.2.3",
            "1.2.3.4.5",
            "256.1.1.1",
            "01.2.3.4",
            "1..2.3",
            ".1.2.3",
            "1.2.3.4.",
            "1.2.x.4",
            "1000.2.3.4",
        ] {
            assert!(!is_valid_ipv4(bad.as_bytes()), "{bad}");
        }
    }

    #[test]
    fn normals_are_valid_and_bounded() {
        let mut rng = RngStream::new(1);
        for _ in 0..5000 {
            let a = gen_ipv4(&mut rng);
            assert!(is_valid_ipv4(&a));
            assert!((7..=15).contains(&a.len()));
        }
    }

    #[test]
    fn octets_are_uniform() {
        let mut rng = RngStream::new(2);
        let draws = 25_000; // 100k octets
        let mut counts = [0usize; 256];
        for _ in 0..draws {
            let a = gen_ipv4(&mut rng);
            for g in groups(&a) {
                let v: usize = std::str::from_utf8(g).unwrap().parse().unwrap();
                counts[v] += 1;
            }
        }
        let n = (draws * 4) as f64;
        let mean = n / 256.0;
        let sigma = (n / 256.0 * (255.0 / 256.0)).sqrt();
        assert!(counts
            .iter()
            .all(|&c| (c as f64 - mean).abs() < 4.0 * sigma));
    }

    #[test]
    fn anomalies_fail_the_validator() {
        let mut rng = RngStream::new(3);
        for kind in [Kind::Trivial, Kind::Length, Kind::Digit, Kind::Dot] {
            for _ in 0..2000 {
                let a = gen_ipv4_anomaly(&mut rng, kind).unwrap();
                assert!(
                    !is_valid_ipv4(&a),
                    "{kind:?}: {}",
                    String::from_utf8_lossy(&a)
                );
                match kind {
                    Kind::Digit => assert!(groups(&a).iter().any(|g| {
                        std::str::from_utf8(g).unwrap().parse::<u32>().unwrap() >= 256
                    })),
                    Kind::Length => assert_ne!(groups(&a).len(), 4),
                    Kind::Trivial => assert!(a.iter().any(|b| !b.is_ascii_digit() && *b != b'.')),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn wrong_family_kind_rejected() {
        let mut rng = RngStream::new(4);
        assert!(gen_ipv4_anomaly(&mut rng, Kind::Colon).is_err());
    }
}
