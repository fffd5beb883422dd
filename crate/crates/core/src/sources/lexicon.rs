//! Rule-lexicon counting of noun phrases and descriptors in scene text.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_LEXICON: &str = include_str!("../../data/lexicon.txt");

/// Words shorter than this are never classified by suffix.
const MIN_SUFFIX_WORD: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFactors {
    pub noun_phrase_count: u32,
    pub descriptor_count: u32,
    pub lambda_value: f64,
}

impl ScalingFactors {
    pub fn from_counts(noun_phrase_count: u32, descriptor_count: u32) -> Self {
        let total = noun_phrase_count as f64 + descriptor_count as f64;
        Self { noun_phrase_count, descriptor_count, lambda_value: 1.0 + total.ln_1p() }
    }

    pub fn neutral() -> Self {
        Self::from_counts(0, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordClass {
    Stop,
    Noun,
    Descriptor,
    Unknown,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    stopwords: HashSet<String>,
    nouns: HashSet<String>,
    descriptors: HashSet<String>,
    noun_suffixes: Vec<String>,
    descriptor_suffixes: Vec<String>,
}

impl Lexicon {
    /// Lexicon shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("builtin lexicon parses")
    }

    /// Parses `[section]` headers followed by one word per line. Blank lines
    /// and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = Self::default();
        let mut section: Option<String> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(name.to_string());
                continue;
            }
            let word = line.to_lowercase();
            match section.as_deref() {
                Some("stopwords") => {
                    lex.stopwords.insert(word);
                }
                Some("nouns") => {
                    lex.nouns.insert(word);
                }
                Some("descriptors") => {
                    lex.descriptors.insert(word);
                }
                Some("noun_suffixes") => lex.noun_suffixes.push(word),
                Some("descriptor_suffixes") => lex.descriptor_suffixes.push(word),
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "lexicon line {}: word outside a known section ({other:?})",
                        n + 1
                    )))
                }
            }
        }
        Ok(lex)
    }

    pub fn classify(&self, word: &str) -> WordClass {
        if word.is_empty() || self.stopwords.contains(word) {
            WordClass::Stop
        } else if self.nouns.contains(word) {
            WordClass::Noun
        } else if self.descriptors.contains(word) {
            WordClass::Descriptor
        } else if word.len() >= MIN_SUFFIX_WORD && self.noun_suffixes.iter().any(|s| word.ends_with(s.as_str())) {
            WordClass::Noun
        } else if word.len() >= MIN_SUFFIX_WORD && self.descriptor_suffixes.iter().any(|s| word.ends_with(s.as_str())) {
            WordClass::Descriptor
        } else {
            WordClass::Unknown
        }
    }

    /// Noun phrases are maximal runs of consecutive nouns; every descriptor
    /// counts once.
    pub fn count(&self, text: &str) -> (u32, u32) {
        let mut phrases = 0;
        let mut descriptors = 0;
        let mut in_run = false;
        for word in tokenize(text) {
            match self.classify(&word) {
                WordClass::Noun => {
                    if !in_run {
                        phrases += 1;
                    }
                    in_run = true;
                }
                WordClass::Descriptor => {
                    descriptors += 1;
                    in_run = false;
                }
                WordClass::Stop | WordClass::Unknown => in_run = false,
            }
        }
        (phrases, descriptors)
    }

    pub fn scaling_factors(&self, description: &str) -> ScalingFactors {
        let (np, desc) = self.count(description);
        ScalingFactors::from_counts(np, desc)
    }
}

/// Lowercased words. Punctuation yields an empty token, which ends any
/// noun run; whitespace does not.
fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_alphabetic() {
            word.extend(c.to_lowercase());
            continue;
        }
        if !word.is_empty() {
            out.push(std::mem::take(&mut word));
        }
        if !c.is_whitespace() {
            out.push(String::new());
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

/// Scaling factors under the builtin lexicon.
pub fn compute_scaling_factors(description: &str) -> ScalingFactors {
    thread_local! {
        static LEXICON: Lexicon = Lexicon::builtin();
    }
    LEXICON.with(|lex| lex.scaling_factors(description))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_neutral() {
        let f = compute_scaling_factors("");
        assert_eq!((f.noun_phrase_count, f.descriptor_count), (0, 0));
        assert_eq!(f.lambda_value, 1.0);
    }

    #[test]
    fn red_cube() {
        let f = compute_scaling_factors("a red cube");
        assert_eq!((f.noun_phrase_count, f.descriptor_count), (1, 1));
        assert!((f.lambda_value - (1.0 + 3f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn noun_runs_form_one_phrase() {
        let lex = Lexicon::builtin();
        assert_eq!(lex.count("the rock tile pattern"), (1, 0));
        assert_eq!(lex.count("Cube, sphere; cone."), (3, 0));
        assert_eq!(lex.count("a curious formation"), (1, 1));
    }

    #[test]
    fn conjunction_increases_lambda() {
        let a = "a small blue sphere";
        let b = "two striped cubes near a cone";
        let both = format!("{a} and {b}");
        let l = |t: &str| compute_scaling_factors(t).lambda_value;
        assert!(l(&both) > l(a) && l(&both) > l(b));
    }

    #[test]
    fn words_outside_sections_are_rejected() {
        assert!(Lexicon::parse("cube\n").is_err());
        assert!(Lexicon::parse("[nouns]\ncube\n").is_ok());
    }
}
