//! LZW with variable code width.
//!
//! The dictionary starts with the 256 single-byte strings and codes are
//! written MSB-first at 9 bits. Whenever the dictionary grows to the
//! current width's capacity the width increases by one, up to 16 bits;
//! a full dictionary is frozen (no reset), so long inputs keep coding
//! against the 65536-entry table. The final partial byte is zero-padded.

use std::collections::HashMap;

const MIN_WIDTH: u32 = 9;
const MAX_WIDTH: u32 = 16;
const FIRST_FREE_CODE: u32 = 256;
const DICT_CAPACITY: u32 = 1 << MAX_WIDTH;

struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    pending: u32,
}

impl BitWriter {
    fn new() -> Self {
        BitWriter {
            out: Vec::new(),
            acc: 0,
            pending: 0,
        }
    }

    fn push(&mut self, code: u32, width: u32) {
        debug_assert!(u64::from(code) < (1u64 << width));
        self.acc = (self.acc << width) | u64::from(code);
        self.pending += width;
        while self.pending >= 8 {
            self.pending -= 8;
            self.out.push((self.acc >> self.pending) as u8);
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.pending > 0 {
            self.out.push((self.acc << (8 - self.pending)) as u8);
        }
        self.out
    }
}

/// Compress `data`, returning the packed code stream.
///
/// An empty input yields an empty output.
pub fn compress(data: &[u8]) -> Vec<u8> {
    let Some((&first, rest)) = data.split_first() else {
        return Vec::new();
    };

    // Single-byte strings are implicit (code = byte value); longer strings
    // live in the map keyed by (prefix code, extension byte).
    let mut dictionary: HashMap<u32, u32> = HashMap::new();
    let mut next_code = FIRST_FREE_CODE;
    let mut width = MIN_WIDTH;
    let mut writer = BitWriter::new();

    let mut current = u32::from(first);
    for &byte in rest {
        let key = (current << 8) | u32::from(byte);
        if let Some(&code) = dictionary.get(&key) {
            current = code;
            continue;
        }
        writer.push(current, width);
        if next_code < DICT_CAPACITY {
            dictionary.insert(key, next_code);
            next_code += 1;
            if next_code == (1 << width) && width < MAX_WIDTH {
                width += 1;
            }
        }
        current = u32::from(byte);
    }
    writer.push(current, width);
    writer.finish()
}

#[cfg(test)]
mod tests {
    use rand::RngExt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    struct BitReader<'a> {
        data: &'a [u8],
        pos: usize,
        acc: u64,
        pending: u32,
    }

    impl<'a> BitReader<'a> {
        fn new(data: &'a [u8]) -> Self {
            BitReader {
                data,
                pos: 0,
                acc: 0,
                pending: 0,
            }
        }

        fn read(&mut self, width: u32) -> Option<u32> {
            while self.pending < width {
                if self.pos == self.data.len() {
                    return None;
                }
                self.acc = (self.acc << 8) | u64::from(self.data[self.pos]);
                self.pos += 1;
                self.pending += 8;
            }
            self.pending -= width;
            let code = (self.acc >> self.pending) & ((1 << width) - 1);
            Some(code as u32)
        }
    }

    /// Reference decoder, mirrored from the encoder's width schedule: the
    /// encoder bumps its width after the dictionary insert that precedes
    /// the next emit, so the decoder accounts for its own pending insert
    /// before reading.
    fn decompress(data: &[u8], expected_len: usize) -> Vec<u8> {
        if data.is_empty() {
            return Vec::new();
        }
        let mut dictionary: Vec<Vec<u8>> = (0..=255u8).map(|b| vec![b]).collect();
        let mut width = MIN_WIDTH;
        let mut reader = BitReader::new(data);

        let first = reader.read(width).expect("first code present") as usize;
        let mut previous = dictionary[first].clone();
        let mut out = previous.clone();

        while out.len() < expected_len {
            // the encoder has already inserted one entry we have not seen
            if dictionary.len() + 1 == (1 << width) as usize && width < MAX_WIDTH {
                width += 1;
            }
            let code = reader.read(width).expect("code stream truncated") as usize;
            let entry = if code < dictionary.len() {
                dictionary[code].clone()
            } else if code == dictionary.len() && dictionary.len() < DICT_CAPACITY as usize {
                let mut e = previous.clone();
                e.push(previous[0]);
                e
            } else {
                panic!(
                    "invalid code {code} against dictionary of {}",
                    dictionary.len()
                );
            };
            if dictionary.len() < DICT_CAPACITY as usize {
                let mut fresh = previous.clone();
                fresh.push(entry[0]);
                dictionary.push(fresh);
            }
            out.extend_from_slice(&entry);
            previous = entry;
        }
        out
    }

    fn roundtrip(data: &[u8]) {
        let packed = compress(data);
        let restored = decompress(&packed, data.len());
        assert_eq!(restored, data);
    }

    #[test]
    fn empty_input_gives_empty_output() {
        assert!(compress(b"").is_empty());
    }

    #[test]
    fn single_byte_costs_one_code() {
        // one 9-bit code packs into two bytes
        assert_eq!(compress(b"z").len(), 2);
    }

    #[test]
    fn roundtrips_small_inputs() {
        roundtrip(b"a");
        roundtrip(b"aaaaaaaaaaaaaaaa");
        roundtrip(b"TOBEORNOTTOBEORTOBEORNOT");
        roundtrip("приключение в лесу".as_bytes());
        roundtrip(&[0u8, 255, 0, 255, 0, 255, 7]);
    }

    #[test]
    fn roundtrips_across_width_growth() {
        // enough distinct pairs to push the dictionary past 512 and 1024
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data: Vec<u8> = (0..40_000).map(|_| rng.random_range(0..=255)).collect();
        roundtrip(&data);
    }

    #[test]
    fn roundtrips_past_dictionary_freeze() {
        // random bytes add roughly one entry per two input bytes, so
        // 300 KiB comfortably fills all 65536 entries
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut data: Vec<u8> = (0..300_000).map(|_| rng.random_range(0..=255)).collect();
        // trailing repetitive run exercises coding against the frozen table
        data.extend(std::iter::repeat_n(b'q', 5_000));
        roundtrip(&data);
    }

    #[test]
    fn roundtrip_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let len = rng.random_range(1..2000);
            let alphabet = rng.random_range(2..=256u32);
            let data: Vec<u8> = (0..len)
                .map(|_| rng.random_range(0..alphabet) as u8)
                .collect();
            roundtrip(&data);
        }
    }

    #[test]
    fn repetitive_input_compresses_well() {
        let data = b"abcdefgh".repeat(512);
        let packed = compress(&data);
        assert!(packed.len() * 4 < data.len());
    }
}
