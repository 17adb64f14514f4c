//! Corpus ingestion and preprocessing.
//!
//! Corpora follow the PAN on-disk layout: one directory per problem
//! holding `known*.txt` documents plus exactly one `unknown*.txt`, and a
//! corpus-level `truth.txt` with one `<problem-id> <Y|N>` line per
//! labeled problem.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::label::Label;
use crate::verification::{Document, Problem};
use crate::{Error, Result};

/// Near-duplicate threshold used when none is configured.
pub const DEFAULT_DEDUP_THRESHOLD: f64 = 0.25;

/// A corpus loaded from disk plus non-fatal observations made on the way.
#[derive(Debug)]
pub struct LoadedCorpus {
    pub problems: Vec<Problem>,
    pub warnings: Vec<String>,
}

/// How to partition a corpus into train and eval sides.
#[derive(Clone, Copy, Debug)]
pub struct SplitSpec {
    /// Fraction of each label class assigned to the train side, in (0, 1).
    pub train_fraction: f64,
    pub seed: u64,
}

/// One removal performed by [`deduplicate`].
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RemovedDuplicate {
    /// The id-earlier document that stays.
    pub kept: String,
    /// The id-later document that was dropped.
    pub removed: String,
    /// Overlap coefficient of the pair (1.0 for byte-identical documents).
    pub coefficient: f64,
}

/// Outcome of near-duplicate removal.
#[derive(Debug)]
pub struct Deduplicated {
    /// Survivors in ascending id order.
    pub kept: Vec<Document>,
    pub removed: Vec<RemovedDuplicate>,
}

// ---------------------------------------------------------------------------
// text cleaning

/// Noise removal applied to every document before compression.
///
/// A cleaning pass runs in fixed order: decode UTF-8 (lossy), drop URL
/// tokens (`scheme://…` and `www.…`), strip HTML tags and entities,
/// drop non-whitespace control characters, collapse runs of three or more
/// identical symbol characters to one, and normalize all whitespace to
/// single spaces with the ends trimmed. Stripping can expose material an
/// earlier step would have consumed, so the pass repeats until the text
/// stops changing; that makes the whole function idempotent.
pub fn clean_text(raw: &[u8]) -> String {
    let mut text = String::from_utf8_lossy(raw).into_owned();
    loop {
        let next = clean_pass(&text);
        if next == text {
            return next;
        }
        text = next;
    }
}

fn clean_pass(text: &str) -> String {
    let text = strip_url_tokens(text);
    let text = strip_html(&text);
    let text = strip_controls(&text);
    let text = collapse_symbol_runs(&text);
    normalize_whitespace(&text)
}

fn is_url_token(token: &str) -> bool {
    let lower = token.to_ascii_lowercase();
    if lower.starts_with("www.") {
        return true;
    }
    // scheme://rest with an alphabetic scheme
    if let Some(pos) = lower.find("://") {
        let scheme = &lower[..pos];
        return !scheme.is_empty()
            && scheme.starts_with(|c: char| c.is_ascii_alphabetic())
            && scheme
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    }
    false
}

fn strip_url_tokens(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while !rest.is_empty() {
        let token_end = rest.find(|c: char| c.is_whitespace()).unwrap_or(rest.len());
        let (token, tail) = rest.split_at(token_end);
        if !is_url_token(token) {
            out.push_str(token);
        }
        let ws_end = tail
            .find(|c: char| !c.is_whitespace())
            .unwrap_or(tail.len());
        let (ws, tail) = tail.split_at(ws_end);
        out.push_str(ws);
        rest = tail;
    }
    out
}

fn is_entity_body(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '#'
}

fn strip_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            '<' => {
                // a tag needs a closing '>', otherwise the '<' is literal
                if let Some(close) = chars[i + 1..].iter().position(|&c| c == '>') {
                    out.push(' ');
                    i += close + 2;
                } else {
                    out.push('<');
                    i += 1;
                }
            }
            '&' => {
                // entity: '&', 1..=32 alphanumeric/# chars, ';'
                let body_len = chars[i + 1..]
                    .iter()
                    .take(32)
                    .take_while(|&&c| is_entity_body(c))
                    .count();
                if body_len > 0 && chars.get(i + 1 + body_len) == Some(&';') {
                    out.push(' ');
                    i += body_len + 2;
                } else {
                    out.push('&');
                    i += 1;
                }
            }
            c => {
                out.push(c);
                i += 1;
            }
        }
    }
    out
}

fn strip_controls(text: &str) -> String {
    text.chars()
        .map(|c| {
            if c.is_control() && !c.is_whitespace() {
                ' '
            } else {
                c
            }
        })
        .collect()
}

fn collapse_symbol_runs(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut run_char = '\0';
    let mut run_len = 0usize;
    for c in text.chars() {
        let symbol = !c.is_alphanumeric() && !c.is_whitespace();
        if symbol && c == run_char {
            run_len += 1;
            // runs of three or more identical symbols collapse to one,
            // so the second repetition is the last one emitted
            if run_len <= 2 {
                out.push(c);
            } else if run_len == 3 {
                out.pop();
            }
        } else {
            run_char = if symbol { c } else { '\0' };
            run_len = 1;
            out.push(c);
        }
    }
    out
}

fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------------------
// near-duplicate detection

/// Lowercased alphanumeric token set of a text.
pub fn tokenize(text: &str) -> HashSet<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// `|X ∩ Y| / min(|X|, |Y|)` over token sets.
pub fn overlap_coefficient(x: &HashSet<String>, y: &HashSet<String>) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyTokenSet);
    }
    let intersection = x.intersection(y).count();
    Ok(intersection as f64 / x.len().min(y.len()) as f64)
}

/// Remove exact and near duplicates from a document set.
///
/// Byte-identical documents go first (the id-earliest copy stays), then
/// every remaining pair is measured once on the original token sets, in
/// ascending id order. A pair whose overlap coefficient exceeds
/// `threshold` loses its id-later member — unless an earlier pair already
/// removed one of the two, so no flagged pair ever loses both members.
pub fn deduplicate(documents: &[Document], threshold: f64) -> Result<Deduplicated> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "dedup threshold must be in (0, 1], got {threshold}"
        )));
    }

    let mut ordered: Vec<&Document> = documents.iter().collect();
    ordered.sort_by(|a, b| a.id.cmp(&b.id));

    let mut removed = Vec::new();
    let mut survivors: Vec<&Document> = Vec::with_capacity(ordered.len());
    let mut seen: BTreeMap<&str, &str> = BTreeMap::new(); // text -> first id
    for doc in ordered {
        match seen.get(doc.text.as_str()) {
            Some(first_id) => removed.push(RemovedDuplicate {
                kept: (*first_id).to_string(),
                removed: doc.id.clone(),
                coefficient: 1.0,
            }),
            None => {
                seen.insert(doc.text.as_str(), doc.id.as_str());
                survivors.push(doc);
            }
        }
    }

    let tokens: Vec<HashSet<String>> = survivors.iter().map(|d| tokenize(&d.text)).collect();
    let mut dropped = vec![false; survivors.len()];
    for i in 0..survivors.len() {
        if dropped[i] {
            continue;
        }
        for j in (i + 1)..survivors.len() {
            if dropped[j] {
                continue;
            }
            let coefficient = overlap_coefficient(&tokens[i], &tokens[j])?;
            if coefficient > threshold {
                dropped[j] = true;
                removed.push(RemovedDuplicate {
                    kept: survivors[i].id.clone(),
                    removed: survivors[j].id.clone(),
                    coefficient,
                });
            }
        }
    }

    let kept = survivors
        .into_iter()
        .zip(&dropped)
        .filter(|(_, &gone)| !gone)
        .map(|(d, _)| d.clone())
        .collect();
    Ok(Deduplicated { kept, removed })
}

// ---------------------------------------------------------------------------
// loading

fn read_lossy(path: &Path, warnings: &mut Vec<String>) -> Result<String> {
    let bytes = fs::read(path).map_err(|source| Error::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    match String::from_utf8(bytes) {
        Ok(text) => Ok(text),
        Err(err) => {
            warnings.push(format!(
                "replaced invalid UTF-8 sequences in {}",
                path.display()
            ));
            Ok(String::from_utf8_lossy(err.as_bytes()).into_owned())
        }
    }
}

fn parse_truth_file(path: &Path) -> Result<BTreeMap<String, Label>> {
    let content = fs::read_to_string(path).map_err(|source| Error::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    let mut truth = BTreeMap::new();
    for (idx, line) in content.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let (Some(id), Some(label), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::MalformedTruthLine {
                path: path.to_path_buf(),
                line: idx + 1,
                content: line.to_string(),
            });
        };
        let label: Label = label.parse().map_err(|_| Error::MalformedTruthLine {
            path: path.to_path_buf(),
            line: idx + 1,
            content: line.to_string(),
        })?;
        truth.insert(id.to_string(), label);
    }
    Ok(truth)
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Load every problem directory under `root`, attaching truth labels from
/// `truth.txt` where present. Documents are decoded as UTF-8; invalid
/// byte sequences are replaced and reported as warnings.
pub fn load_corpus(root: &Path) -> Result<LoadedCorpus> {
    let mut warnings = Vec::new();

    let truth_path = root.join("truth.txt");
    let truth = if truth_path.is_file() {
        parse_truth_file(&truth_path)?
    } else {
        warnings.push(format!("no truth file at {}", truth_path.display()));
        BTreeMap::new()
    };

    let entries = fs::read_dir(root).map_err(|source| Error::UnreadableFile {
        path: root.to_path_buf(),
        source,
    })?;
    let mut dirs: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .filter(|p| !file_stem(p).starts_with('.'))
        .collect();
    dirs.sort();

    for id in truth.keys() {
        let dir = root.join(id);
        if !dir.is_dir() {
            return Err(Error::TruthReferencesMissingProblem {
                id: id.clone(),
                dir,
            });
        }
    }

    let mut problems = Vec::with_capacity(dirs.len());
    for dir in dirs {
        let id = dir
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();

        let mut known_paths = Vec::new();
        let mut unknown_paths = Vec::new();
        let files = fs::read_dir(&dir).map_err(|source| Error::UnreadableFile {
            path: dir.clone(),
            source,
        })?;
        for file in files.filter_map(|e| e.ok().map(|e| e.path())) {
            if !file.is_file() {
                continue;
            }
            let stem = file_stem(&file);
            if stem.starts_with("unknown") {
                unknown_paths.push(file);
            } else if stem.starts_with("known") {
                known_paths.push(file);
            }
        }
        match unknown_paths.len() {
            0 => return Err(Error::MissingUnknown { dir }),
            1 => {}
            _ => return Err(Error::MultipleUnknowns { dir }),
        }
        if known_paths.is_empty() {
            return Err(Error::NoKnownDocuments { dir });
        }
        known_paths.sort();

        let mut known = Vec::with_capacity(known_paths.len());
        for path in &known_paths {
            let text = read_lossy(path, &mut warnings)?;
            if text.is_empty() {
                warnings.push(format!("empty document {}", path.display()));
            }
            known.push(Document {
                id: file_stem(path),
                text,
            });
        }
        known.sort_by(|a, b| a.id.cmp(&b.id));

        let unknown_text = read_lossy(&unknown_paths[0], &mut warnings)?;
        if unknown_text.is_empty() {
            warnings.push(format!("empty document {}", unknown_paths[0].display()));
        }

        problems.push(Problem {
            truth: truth.get(&id).copied(),
            unknown: Document {
                id: file_stem(&unknown_paths[0]),
                text: unknown_text,
            },
            known,
            id,
        });
    }

    problems.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(LoadedCorpus { problems, warnings })
}

/// Write `problems` under `root` in the same on-disk layout that
/// [`load_corpus`] reads, including a regenerated `truth.txt` for the
/// labeled problems.
pub fn write_corpus(root: &Path, problems: &[Problem]) -> Result<()> {
    let io_err = |context: String| move |source| Error::Io { context, source };
    fs::create_dir_all(root).map_err(io_err(format!("creating {}", root.display())))?;

    let mut truth_lines = String::new();
    let mut ordered: Vec<&Problem> = problems.iter().collect();
    ordered.sort_by(|a, b| a.id.cmp(&b.id));

    for problem in ordered {
        let dir = root.join(&problem.id);
        fs::create_dir_all(&dir).map_err(io_err(format!("creating {}", dir.display())))?;
        for doc in &problem.known {
            let path = dir.join(format!("{}.txt", doc.id));
            fs::write(&path, &doc.text).map_err(io_err(format!("writing {}", path.display())))?;
        }
        let unknown_path = dir.join(format!("{}.txt", problem.unknown.id));
        fs::write(&unknown_path, &problem.unknown.text)
            .map_err(io_err(format!("writing {}", unknown_path.display())))?;
        if let Some(label) = problem.truth {
            truth_lines.push_str(&format!("{} {}\n", problem.id, label));
        }
    }

    let truth_path = root.join("truth.txt");
    fs::write(&truth_path, truth_lines)
        .map_err(io_err(format!("writing {}", truth_path.display())))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// splitting

/// Seeded partition into train and eval sides, preserving the corpus's
/// label balance within one problem per class.
pub fn split(problems: Vec<Problem>, spec: SplitSpec) -> Result<(Vec<Problem>, Vec<Problem>)> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction must be in (0, 1), got {}",
            spec.train_fraction
        )));
    }
    let total = problems.len();

    let mut sorted = problems;
    sorted.sort_by(|a, b| a.id.cmp(&b.id));

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut train = Vec::new();
    let mut eval = Vec::new();
    // per-class proportional assignment keeps both sides balanced
    for class in [Some(Label::Y), Some(Label::N), None] {
        let mut group: Vec<Problem> = Vec::new();
        let mut rest: Vec<Problem> = Vec::new();
        for p in sorted.drain(..) {
            if p.truth == class {
                group.push(p);
            } else {
                rest.push(p);
            }
        }
        sorted = rest;
        group.shuffle(&mut rng);
        let take = (spec.train_fraction * group.len() as f64).round() as usize;
        for (i, p) in group.into_iter().enumerate() {
            if i < take {
                train.push(p);
            } else {
                eval.push(p);
            }
        }
    }

    if train.is_empty() || eval.is_empty() {
        return Err(Error::TooFewProblems { total });
    }
    train.sort_by(|a, b| a.id.cmp(&b.id));
    eval.sort_by(|a, b| a.id.cmp(&b.id));
    Ok((train, eval))
}
