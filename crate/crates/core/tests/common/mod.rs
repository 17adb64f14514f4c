#![allow(dead_code)] // each integration test binary uses a different subset

//! Shared test support: deterministic synthetic authors and PAN-layout
//! corpora built from them.
//!
//! Each author is a seeded profile over a shared English vocabulary:
//! a private slice of content words, a weighted function-word habit,
//! sentence-length and punctuation tendencies. Documents sampled from the
//! same profile share enough regularity for compression models to pick
//! up, while different profiles overlap enough to keep verification
//! non-trivial.

use std::fs;
use std::path::Path;

use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FUNCTION_WORDS: &[&str] = &[
    "the", "of", "and", "a", "to", "in", "is", "was", "that", "for", "it", "with", "as", "his",
    "her", "on", "be", "at", "by", "had", "not", "are", "but", "from", "or", "have", "an", "they",
    "which", "one", "you", "were", "all", "we", "when", "there", "can", "if", "would", "who",
    "what", "so", "up", "out", "about", "into", "than", "then", "them", "these", "some", "could",
    "other", "its", "over", "only", "also", "after", "most", "such",
];

const CONTENT_WORDS: &[&str] = &[
    "house",
    "river",
    "window",
    "garden",
    "winter",
    "summer",
    "morning",
    "evening",
    "letter",
    "ledger",
    "harbor",
    "village",
    "market",
    "mountain",
    "valley",
    "forest",
    "meadow",
    "bridge",
    "lantern",
    "candle",
    "shadow",
    "silence",
    "journey",
    "stranger",
    "neighbor",
    "teacher",
    "doctor",
    "sailor",
    "farmer",
    "miller",
    "weaver",
    "painter",
    "writer",
    "reader",
    "keeper",
    "builder",
    "hunter",
    "walker",
    "dreamer",
    "worker",
    "machine",
    "engine",
    "signal",
    "station",
    "harvest",
    "orchard",
    "kitchen",
    "ceiling",
    "doorway",
    "staircase",
    "chimney",
    "furnace",
    "copper",
    "silver",
    "timber",
    "granite",
    "marble",
    "velvet",
    "cotton",
    "leather",
    "paper",
    "pencil",
    "bottle",
    "basket",
    "barrel",
    "wagon",
    "carriage",
    "railway",
    "steamer",
    "compass",
    "anchor",
    "voyage",
    "island",
    "coast",
    "cliff",
    "storm",
    "thunder",
    "lightning",
    "rainbow",
    "sunrise",
    "sunset",
    "twilight",
    "midnight",
    "season",
    "weather",
    "climate",
    "current",
    "stream",
    "fountain",
    "well",
    "cellar",
    "attic",
    "parlor",
    "study",
    "library",
    "museum",
    "theater",
    "concert",
    "festival",
    "wedding",
    "funeral",
    "birthday",
    "holiday",
    "weekend",
    "moment",
    "minute",
    "hour",
    "decade",
    "century",
    "history",
    "memory",
    "promise",
    "secret",
    "story",
    "legend",
    "ballad",
    "melody",
    "rhythm",
    "whisper",
    "echo",
    "voice",
    "language",
    "phrase",
    "sentence",
    "chapter",
    "volume",
    "margin",
    "ink",
    "quill",
    "parchment",
    "scroll",
    "archive",
    "record",
    "account",
    "balance",
    "fortune",
    "treasure",
    "burden",
    "bargain",
    "wager",
    "debt",
    "wage",
    "trade",
    "craft",
    "skill",
    "habit",
    "custom",
    "manner",
    "virtue",
    "courage",
    "patience",
    "wisdom",
    "folly",
    "sorrow",
    "delight",
    "wonder",
    "terror",
    "comfort",
    "warmth",
    "hunger",
    "thirst",
    "slumber",
    "vigil",
    "labor",
    "leisure",
    "travel",
    "arrival",
    "departure",
    "farewell",
    "greeting",
    "question",
    "answer",
    "reason",
    "purpose",
    "design",
    "pattern",
    "texture",
    "surface",
    "horizon",
    "distance",
    "direction",
    "corner",
    "circle",
    "square",
    "spiral",
    "thread",
    "needle",
    "fabric",
    "garment",
    "pocket",
    "button",
    "collar",
    "ribbon",
    "mirror",
    "portrait",
    "canvas",
    "palette",
    "brush",
    "sketch",
    "figure",
    "gesture",
    "footstep",
    "pathway",
    "crossing",
    "boundary",
    "frontier",
    "territory",
    "kingdom",
    "empire",
    "council",
    "charter",
    "statute",
    "verdict",
    "witness",
    "jury",
    "clerk",
    "notary",
    "courier",
    "messenger",
    "herald",
    "beacon",
    "harvester",
    "granary",
    "pasture",
    "flock",
    "shepherd",
    "saddle",
    "stable",
    "smithy",
    "furrow",
    "plough",
    "scythe",
    "sickle",
    "mill",
    "grain",
    "flour",
    "loaf",
    "supper",
    "banquet",
    "goblet",
    "pitcher",
    "hearth",
    "ember",
    "ash",
    "smoke",
    "steam",
    "frost",
    "snowfall",
    "puddle",
    "gravel",
    "cobble",
    "pavement",
    "alley",
    "avenue",
    "plaza",
    "tower",
    "spire",
    "belfry",
    "cloister",
    "chapel",
    "organ",
    "choir",
    "hymn",
    "prayer",
    "sermon",
    "parish",
    "pilgrim",
    "relic",
    "shrine",
    "harvestman",
    "tide",
    "wave",
    "foam",
    "gull",
    "heron",
    "sparrow",
    "swallow",
    "falcon",
    "raven",
    "badger",
    "otter",
    "willow",
    "cedar",
    "birch",
    "maple",
    "acorn",
    "moss",
    "fern",
    "bramble",
    "clover",
    "heather",
];

/// Stylistic profile of one synthetic author.
pub struct AuthorStyle {
    content_pool: Vec<&'static str>,
    function_weights: Vec<f64>,
    function_rate: f64,
    comma_rate: f64,
    exclaim_rate: f64,
    mean_sentence_len: usize,
    signature: String,
    signature_rate: f64,
}

impl AuthorStyle {
    pub fn new(author_seed: u64) -> AuthorStyle {
        let mut rng = ChaCha8Rng::seed_from_u64(author_seed.wrapping_mul(2_654_435_761));
        // each author works from a contiguous private window of the shared
        // vocabulary plus a sprinkle of words from anywhere
        let window = 60 + rng.random_range(0..40);
        let start = rng.random_range(0..CONTENT_WORDS.len() - window);
        let mut content_pool: Vec<&'static str> = CONTENT_WORDS[start..start + window].to_vec();
        for _ in 0..20 {
            content_pool.push(CONTENT_WORDS[rng.random_range(0..CONTENT_WORDS.len())]);
        }

        let function_weights = (0..FUNCTION_WORDS.len())
            .map(|_| rng.random_range(0.05..1.0f64).powi(2))
            .collect();

        let a = rng.random_range(0..content_pool.len());
        let b = rng.random_range(0..content_pool.len());
        let c = rng.random_range(0..FUNCTION_WORDS.len());
        let signature = format!(
            "{} {} {}",
            content_pool[a], FUNCTION_WORDS[c], content_pool[b]
        );

        AuthorStyle {
            content_pool,
            function_weights,
            function_rate: rng.random_range(0.35..0.55),
            comma_rate: rng.random_range(0.03..0.15),
            exclaim_rate: rng.random_range(0.0..0.08),
            mean_sentence_len: rng.random_range(7..19),
            signature,
            signature_rate: rng.random_range(0.01..0.05),
        }
    }

    fn pick_function_word(&self, rng: &mut ChaCha8Rng) -> &'static str {
        let total: f64 = self.function_weights.iter().sum();
        let mut target = rng.random_range(0.0..total);
        for (word, weight) in FUNCTION_WORDS.iter().zip(&self.function_weights) {
            if target < *weight {
                return word;
            }
            target -= weight;
        }
        FUNCTION_WORDS[0]
    }

    fn pick_content_word(&self, rng: &mut ChaCha8Rng) -> &'static str {
        // mild zipf bias toward the front of the author's pool
        let r: f64 = rng.random_range(0.0..1.0);
        let idx = ((r * r) * self.content_pool.len() as f64) as usize;
        self.content_pool[idx.min(self.content_pool.len() - 1)]
    }

    /// Generate roughly `target_bytes` of text, deterministic in
    /// `(author_seed via self, doc_seed)`.
    pub fn generate(&self, doc_seed: u64, target_bytes: usize) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(doc_seed.wrapping_mul(0x9E37_79B9));
        let mut out = String::with_capacity(target_bytes + 64);
        while out.len() < target_bytes {
            let len = 3 + rng.random_range(0..self.mean_sentence_len * 2);
            let mut sentence = Vec::with_capacity(len);
            for _ in 0..len {
                let word = if rng.random_range(0.0..1.0) < self.function_rate {
                    self.pick_function_word(&mut rng)
                } else {
                    self.pick_content_word(&mut rng)
                };
                sentence.push(word.to_string());
                if rng.random_range(0.0..1.0) < self.comma_rate {
                    let last = sentence.last_mut().unwrap();
                    last.push(',');
                }
            }
            if rng.random_range(0.0..1.0) < self.signature_rate {
                sentence.push(self.signature.clone());
            }
            let mut text = sentence.join(" ");
            if let Some(first) = text.get_mut(0..1) {
                first.make_ascii_uppercase();
            }
            let terminal = if rng.random_range(0.0..1.0) < self.exclaim_rate {
                '!'
            } else {
                '.'
            };
            text.push(terminal);
            text.push(' ');
            out.push_str(&text);
        }
        out.truncate(target_bytes);
        // avoid slicing through a multi-byte char (vocabulary is ASCII,
        // but stay safe)
        while !out.is_char_boundary(out.len()) {
            out.pop();
        }
        out.trim_end().to_string()
    }
}

/// Shape of a generated corpus.
#[derive(Clone, Copy)]
pub struct CorpusShape {
    pub problems: usize,
    pub knowns_per_problem: usize,
    pub doc_bytes: usize,
}

/// Write a balanced PAN-layout corpus of synthetic problems under `dir`.
///
/// Even-indexed problems are same-author (Y), odd ones pair the author
/// with a different author's questioned document (N).
pub fn write_synthetic_corpus(dir: &Path, shape: CorpusShape, seed: u64) {
    fs::create_dir_all(dir).unwrap();
    let mut truth = String::new();
    for index in 0..shape.problems {
        let id = format!("EN{:04}", index + 1);
        let problem_dir = dir.join(&id);
        fs::create_dir_all(&problem_dir).unwrap();

        let author_seed = seed.wrapping_add(index as u64 * 7919);
        let author = AuthorStyle::new(author_seed);
        for k in 0..shape.knowns_per_problem {
            let text = author.generate(
                seed.wrapping_add((index as u64) << 20)
                    .wrapping_add(k as u64),
                shape.doc_bytes,
            );
            fs::write(problem_dir.join(format!("known{:02}.txt", k + 1)), text).unwrap();
        }

        let same_author = index % 2 == 0;
        let unknown_text = if same_author {
            author.generate(
                seed.wrapping_add((index as u64) << 20).wrapping_add(9999),
                shape.doc_bytes,
            )
        } else {
            let other = AuthorStyle::new(author_seed.wrapping_add(104_729));
            other.generate(
                seed.wrapping_add((index as u64) << 20).wrapping_add(8888),
                shape.doc_bytes,
            )
        };
        fs::write(problem_dir.join("unknown.txt"), unknown_text).unwrap();
        truth.push_str(&format!("{} {}\n", id, if same_author { "Y" } else { "N" }));
    }
    fs::write(dir.join("truth.txt"), truth).unwrap();
}

/// Run the `cmav` binary with the given arguments.
pub fn cmav(args: &[&str]) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_cmav"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout_of(output: &std::process::Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

pub fn stderr_of(output: &std::process::Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}
