use std::collections::HashSet;
use std::sync::OnceLock;

use super::{Paragraph, Sentence, Span, Token};

const ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

/// Output of [`segment`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Segmentation {
    pub paragraphs: Vec<Paragraph>,
    pub sentences: Vec<Sentence>,
    pub tokens: Vec<Token>,
}

impl Segmentation {
    /// Tokens grouped per sentence, in sentence order.
    pub fn sentence_tokens(&self) -> Vec<&[Token]> {
        group_by_sentence(&self.tokens)
    }
}

/// Splits a token list (ordered by sentence) into per-sentence slices.
pub fn group_by_sentence(tokens: &[Token]) -> Vec<&[Token]> {
    tokens
        .chunk_by(|a, b| a.sentence_index == b.sentence_index)
        .collect()
}

/// Sentence and token splitter.
#[derive(Debug, Clone)]
pub struct Segmenter {
    abbreviations: HashSet<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Segmenter::with_abbreviations(data_lines(ABBREVIATIONS))
    }
}

impl Segmenter {
    pub fn with_abbreviations<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Segmenter {
            abbreviations: entries
                .into_iter()
                .map(|s| s.as_ref().trim().trim_end_matches('.').to_lowercase())
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }

    /// Shared instance built from the bundled abbreviation list.
    pub fn shared() -> &'static Segmenter {
        static SHARED: OnceLock<Segmenter> = OnceLock::new();
        SHARED.get_or_init(Segmenter::default)
    }

    pub fn segment(&self, document: &str) -> Segmentation {
        let mut out = Segmentation::default();
        for (paragraph, text) in split_paragraphs(document) {
            let (sentences, tokens) = self.segment_paragraph(
                text,
                paragraph.index,
                paragraph.span.start,
                out.sentences.len() + 1,
            );
            out.sentences.extend(sentences);
            out.tokens.extend(tokens);
            out.paragraphs.push(paragraph);
        }
        out
    }

    /// Segments one paragraph. Spans are shifted by `char_offset`; sentences
    /// are numbered from `first_sentence`.
    pub fn segment_paragraph(
        &self,
        text: &str,
        paragraph_index: usize,
        char_offset: usize,
        first_sentence: usize,
    ) -> (Vec<Sentence>, Vec<Token>) {
        let chars: Vec<char> = text.chars().collect();
        let mut sentences = Vec::new();
        let mut tokens = Vec::new();
        for (i, local) in self.sentence_spans(&chars).into_iter().enumerate() {
            let index = first_sentence + i;
            for (span, token) in self.tokenize(&chars, local) {
                tokens.push(Token {
                    text: token,
                    span: span.shifted(char_offset),
                    sentence_index: index,
                    pos: None,
                });
            }
            sentences.push(Sentence {
                index,
                span: local.shifted(char_offset),
                paragraph_index,
            });
        }
        (sentences, tokens)
    }

    fn sentence_spans(&self, chars: &[char]) -> Vec<Span> {
        let mut spans = Vec::new();
        let mut start = skip_whitespace(chars, 0);
        let mut i = start;
        while i < chars.len() {
            if !is_terminator(chars[i]) {
                i += 1;
                continue;
            }
            let run_start = i;
            while i < chars.len() && is_terminator(chars[i]) {
                i += 1;
            }
            let single_period = i - run_start == 1 && chars[run_start] == '.';
            while i < chars.len() && is_closer(chars[i]) {
                i += 1;
            }
            let at_break = i == chars.len() || chars[i].is_whitespace();
            if at_break && !(single_period && self.is_abbreviation_before(chars, run_start)) {
                spans.push(trim_span(chars, Span::new(start, i)));
                start = skip_whitespace(chars, i);
                i = start;
            }
        }
        if start < chars.len() {
            let tail = trim_span(chars, Span::new(start, chars.len()));
            if !tail.is_empty() {
                spans.push(tail);
            }
        }
        spans
    }

    /// True when the period at `dot` closes an abbreviation or an initial.
    fn is_abbreviation_before(&self, chars: &[char], dot: usize) -> bool {
        let mut begin = dot;
        while begin > 0 && (chars[begin - 1].is_alphanumeric() || chars[begin - 1] == '.') {
            begin -= 1;
        }
        if begin == dot {
            return false;
        }
        let word: String = chars[begin..dot].iter().collect();
        if word.chars().count() == 1 && word.chars().all(char::is_uppercase) {
            return true;
        }
        self.abbreviations.contains(&word.to_lowercase())
    }

    fn tokenize(&self, chars: &[char], sentence: Span) -> Vec<(Span, String)> {
        let mut out = Vec::new();
        let mut i = sentence.start;
        while i < sentence.end {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if !c.is_alphanumeric() {
                out.push((Span::new(i, i + 1), c.to_string()));
                i += 1;
                continue;
            }
            if let Some(end) = self.abbreviation_token(chars, i, sentence.end) {
                out.push((Span::new(i, end), chars[i..end].iter().collect()));
                i = end;
                continue;
            }
            let mut end = i + 1;
            while end < sentence.end {
                let ch = chars[end];
                if ch.is_alphanumeric() {
                    end += 1;
                } else if is_joiner(ch)
                    && end + 1 < sentence.end
                    && chars[end + 1].is_alphanumeric()
                {
                    end += 2;
                } else {
                    break;
                }
            }
            let word: String = chars[i..end].iter().collect();
            match clitic_split(&word) {
                Some(stem_len) => {
                    let cut = i + stem_len;
                    out.push((Span::new(i, cut), chars[i..cut].iter().collect()));
                    out.push((Span::new(cut, end), chars[cut..end].iter().collect()));
                }
                None => out.push((Span::new(i, end), word)),
            }
            i = end;
        }
        out
    }

    /// End offset of an abbreviation token ("Mr.", "e.g.") starting at `i`.
    fn abbreviation_token(&self, chars: &[char], i: usize, limit: usize) -> Option<usize> {
        let mut end = i;
        while end < limit && (chars[end].is_alphanumeric() || chars[end] == '.') {
            end += 1;
        }
        // trim back to the last period
        while end > i && chars[end - 1] != '.' {
            end -= 1;
        }
        if end <= i + 1 {
            return None;
        }
        let word: String = chars[i..end - 1].iter().collect();
        self.abbreviations
            .contains(&word.to_lowercase())
            .then_some(end)
    }
}

/// Segments `document` with the bundled abbreviation list.
pub fn segment(document: &str) -> Segmentation {
    Segmenter::shared().segment(document)
}

/// Splits on runs of two or more newlines. Each paragraph span is trimmed of
/// surrounding whitespace and whitespace-only chunks are dropped.
pub fn split_paragraphs(document: &str) -> Vec<(Paragraph, &str)> {
    let mut out = Vec::new();
    let mut push = |byte_start: usize, byte_end: usize, char_start: usize| {
        let chunk = &document[byte_start..byte_end];
        let trimmed_front = chunk.trim_start();
        let lead_bytes = chunk.len() - trimmed_front.len();
        let body = trimmed_front.trim_end();
        if body.is_empty() {
            return;
        }
        let lead_chars = chunk[..lead_bytes].chars().count();
        let start = char_start + lead_chars;
        let end = start + body.chars().count();
        out.push((
            Paragraph {
                index: out.len(),
                span: Span::new(start, end),
                content_hash: content_hash(body),
            },
            body,
        ));
    };

    let bytes = document.as_bytes();
    let mut chunk_byte = 0;
    let mut chunk_char = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'\n' && bytes.get(i + 1) == Some(&b'\n') {
            let run_start = i;
            while i < bytes.len() && bytes[i] == b'\n' {
                i += 1;
            }
            let chunk_chars = document[chunk_byte..run_start].chars().count();
            push(chunk_byte, run_start, chunk_char);
            chunk_char += chunk_chars + (i - run_start);
            chunk_byte = i;
            continue;
        }
        i += 1;
    }
    push(chunk_byte, bytes.len(), chunk_char);
    out
}

/// 64-bit FNV-1a over the UTF-8 bytes; stable across runs and platforms.
pub fn content_hash(text: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    text.bytes()
        .fold(OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

pub(crate) fn data_lines(raw: &str) -> impl Iterator<Item = &str> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '?' | '!' | '…')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | '”' | '’' | ')' | ']' | '»' | '*' | '_')
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '’' | '-')
}

fn skip_whitespace(chars: &[char], mut i: usize) -> usize {
    while i < chars.len() && chars[i].is_whitespace() {
        i += 1;
    }
    i
}

fn trim_span(chars: &[char], span: Span) -> Span {
    let mut start = span.start;
    let mut end = span.end;
    while start < end && chars[start].is_whitespace() {
        start += 1;
    }
    while end > start && chars[end - 1].is_whitespace() {
        end -= 1;
    }
    Span::new(start, end)
}

/// Character length of the stem when `word` ends in an English clitic
/// ('s, 'll, 're, 've, 'd, 'm, n't).
fn clitic_split(word: &str) -> Option<usize> {
    let lower: Vec<char> = word.to_lowercase().chars().collect();
    let n = lower.len();
    let apostrophe = |c: char| c == '\'' || c == '’';
    if n >= 4 && lower[n - 3] == 'n' && apostrophe(lower[n - 2]) && lower[n - 1] == 't' {
        return Some(n - 3);
    }
    for suffix in ["s", "d", "m", "ll", "re", "ve"] {
        let k = suffix.len();
        if n > k + 1 && apostrophe(lower[n - k - 1]) {
            let tail: String = lower[n - k..].iter().collect();
            if tail == suffix && lower[n - k - 2].is_alphabetic() {
                return Some(n - k - 1);
            }
        }
    }
    None
}
