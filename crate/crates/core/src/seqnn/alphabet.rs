/// The byte alphabet: 256 raw byte values plus one delimiter symbol.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SymbolAlphabet;

impl SymbolAlphabet {
    pub const SIZE: usize = 257;
    pub const DELIMITER: usize = 256;

    pub fn encode(byte: u8) -> usize {
        byte as usize
    }

    /// `None` for the delimiter and anything outside the alphabet.
    pub fn decode(index: usize) -> Option<u8> {
        u8::try_from(index).ok()
    }

    /// Human-readable name of a symbol, used in logs and reports.
    pub fn describe(index: usize) -> String {
        match Self::decode(index) {
            Some(b) if b.is_ascii_graphic() => format!("'{}'", b as char),
            Some(b) => format!("0x{b:02x}"),
            None if index == Self::DELIMITER => "<delim>".to_string(),
            None => format!("#{index}"),
        }
    }
}

/// Delimiter-framed symbol indices: `[256] ++ bytes ++ [256]`.
pub fn frame(raw: &[u8]) -> Vec<usize> {
    let mut out = Vec::with_capacity(raw.len() + 2);
    out.push(SymbolAlphabet::DELIMITER);
    out.extend(raw.iter().map(|&b| SymbolAlphabet::encode(b)));
    out.push(SymbolAlphabet::DELIMITER);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn framing() {
        assert_eq!(frame(b""), vec![256, 256]);
        assert_eq!(frame(&[65]), vec![256, 65, 256]);
        assert_eq!(frame(b"1.2"), vec![256, 49, 46, 50, 256]);
    }

    #[test]
    fn encode_decode_round_trip() {
        for b in 0..=255u8 {
            assert_eq!(SymbolAlphabet::decode(SymbolAlphabet::encode(b)), Some(b));
        }
        assert_eq!(SymbolAlphabet::decode(SymbolAlphabet::DELIMITER), None);
    }
}
