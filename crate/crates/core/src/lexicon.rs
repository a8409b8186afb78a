//! Word lists that drive mention detection, pronoun resolution and
//! tagging. Every list ships as a plain-text data file; [`Lexicons::from_dir`]
//! loads replacements with the same file names.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use crate::text::segment::data_lines;
use crate::text::Pos;

const HONORIFICS: &str = include_str!("../data/honorifics.txt");
const STOPLIST: &str = include_str!("../data/stoplist.txt");
const GENDER_NAMES: &str = include_str!("../data/gender_names.txt");
const POS_LEXICON: &str = include_str!("../data/pos_lexicon.tsv");
const POS_SUPPLEMENT: &str = include_str!("../data/pos_supplement.tsv");
const CLOSED_CLASS: &str = include_str!("../data/closed_class.tsv");
const SUFFIX_RULES: &str = include_str!("../data/suffix_rules.tsv");

/// Grammatical gender of a pronoun or its antecedent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Feminine,
    Masculine,
}

/// Syntactic role of a closed-class word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Pronoun,
    Determiner,
    Auxiliary,
    Copula,
    Preposition,
    Conjunction,
    Degree,
    Adverb,
    Negation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuffixClass {
    Fixed(Pos),
    /// -ed / -ing: verb after an auxiliary, adjective before a noun.
    Ambiguous,
}

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("reading {0}: {1}")]
    Io(String, #[source] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct Lexicons {
    pub honorifics: HashSet<String>,
    pub stoplist: HashSet<String>,
    pub gender_names: HashMap<String, Gender>,
    /// Lowercase word to its possible classes, most frequent first.
    pub pos: HashMap<String, Vec<Pos>>,
    pub closed: HashMap<String, (Pos, Role)>,
    /// Sorted longest suffix first.
    pub suffixes: Vec<(String, SuffixClass)>,
}

impl Lexicons {
    /// The bundled lexicons, parsed once.
    pub fn bundled() -> &'static Lexicons {
        static BUNDLED: OnceLock<Lexicons> = OnceLock::new();
        BUNDLED.get_or_init(|| {
            Lexicons::parse(&Sources::default()).expect("bundled lexicons are well-formed")
        })
    }

    /// Loads lexicons from a directory; files that are absent fall back to
    /// the bundled copy.
    pub fn from_dir(dir: &Path) -> Result<Lexicons, LexiconError> {
        let read = |name: &str, fallback: &'static str| -> Result<String, LexiconError> {
            let path = dir.join(name);
            if path.exists() {
                std::fs::read_to_string(&path)
                    .map_err(|e| LexiconError::Io(path.display().to_string(), e))
            } else {
                Ok(fallback.to_string())
            }
        };
        let owned = [
            read("honorifics.txt", HONORIFICS)?,
            read("stoplist.txt", STOPLIST)?,
            read("gender_names.txt", GENDER_NAMES)?,
            read("pos_lexicon.tsv", POS_LEXICON)?,
            read("pos_supplement.tsv", POS_SUPPLEMENT)?,
            read("closed_class.tsv", CLOSED_CLASS)?,
            read("suffix_rules.tsv", SUFFIX_RULES)?,
        ];
        Lexicons::parse(&Sources {
            honorifics: &owned[0],
            stoplist: &owned[1],
            gender_names: &owned[2],
            pos_lexicon: &owned[3],
            pos_supplement: &owned[4],
            closed_class: &owned[5],
            suffix_rules: &owned[6],
        })
    }

    fn parse(src: &Sources<'_>) -> Result<Lexicons, LexiconError> {
        let word_set =
            |raw: &str| -> HashSet<String> { data_lines(raw).map(str::to_lowercase).collect() };

        let mut gender_names = HashMap::new();
        for (line, fields) in tsv("gender_names.txt", src.gender_names, 2)? {
            let gender = match fields[1].as_str() {
                "f" => Gender::Feminine,
                "m" => Gender::Masculine,
                other => {
                    return Err(parse_err(
                        "gender_names.txt",
                        line,
                        format!("gender must be f or m, got {other:?}"),
                    ))
                }
            };
            gender_names.entry(fields[0].to_lowercase()).or_insert(gender);
        }

        let mut pos: HashMap<String, Vec<Pos>> = HashMap::new();
        for (file, raw) in [
            ("pos_lexicon.tsv", src.pos_lexicon),
            ("pos_supplement.tsv", src.pos_supplement),
        ] {
            for (line, fields) in tsv(file, raw, 2)? {
                let classes = pos.entry(fields[0].to_lowercase()).or_default();
                for class in fields[1].split(',') {
                    let class: Pos = class
                        .parse()
                        .map_err(|c| parse_err(file, line, format!("unknown class {c:?}")))?;
                    if !classes.contains(&class) {
                        classes.push(class);
                    }
                }
            }
        }

        let mut closed = HashMap::new();
        for (line, fields) in tsv("closed_class.tsv", src.closed_class, 3)? {
            let class: Pos = fields[1]
                .parse()
                .map_err(|c| parse_err("closed_class.tsv", line, format!("unknown class {c:?}")))?;
            let role = match fields[2].as_str() {
                "pronoun" => Role::Pronoun,
                "det" => Role::Determiner,
                "aux" => Role::Auxiliary,
                "copula" => Role::Copula,
                "prep" => Role::Preposition,
                "conj" => Role::Conjunction,
                "degree" => Role::Degree,
                "adverb" => Role::Adverb,
                "neg" => Role::Negation,
                other => {
                    return Err(parse_err(
                        "closed_class.tsv",
                        line,
                        format!("unknown role {other:?}"),
                    ))
                }
            };
            closed.insert(fields[0].to_lowercase(), (class, role));
        }

        let mut suffixes = Vec::new();
        for (line, fields) in tsv("suffix_rules.tsv", src.suffix_rules, 2)? {
            let class = if fields[1] == "AMBIG" {
                SuffixClass::Ambiguous
            } else {
                SuffixClass::Fixed(fields[1].parse().map_err(|c| {
                    parse_err("suffix_rules.tsv", line, format!("unknown class {c:?}"))
                })?)
            };
            suffixes.push((fields[0].to_lowercase(), class));
        }
        suffixes.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(&b.0)));

        Ok(Lexicons {
            honorifics: word_set(src.honorifics),
            stoplist: word_set(src.stoplist),
            gender_names,
            pos,
            closed,
            suffixes,
        })
    }

    pub fn is_honorific(&self, word: &str) -> bool {
        self.honorifics
            .contains(word.trim_end_matches('.').to_lowercase().as_str())
    }

    pub fn gender_of(&self, word: &str) -> Option<Gender> {
        self.gender_names
            .get(word.trim_end_matches('.').to_lowercase().as_str())
            .copied()
    }

    pub fn role(&self, lower: &str) -> Option<Role> {
        self.closed.get(lower).map(|(_, role)| *role)
    }

    /// True when the lowercase form is an ordinary (non-proper) word.
    pub fn is_common_word(&self, lower: &str) -> bool {
        self.closed.contains_key(lower)
            || self
                .pos
                .get(lower)
                .is_some_and(|classes| classes.iter().any(|c| *c != Pos::Proper))
    }
}

struct Sources<'a> {
    honorifics: &'a str,
    stoplist: &'a str,
    gender_names: &'a str,
    pos_lexicon: &'a str,
    pos_supplement: &'a str,
    closed_class: &'a str,
    suffix_rules: &'a str,
}

impl Default for Sources<'static> {
    fn default() -> Self {
        Sources {
            honorifics: HONORIFICS,
            stoplist: STOPLIST,
            gender_names: GENDER_NAMES,
            pos_lexicon: POS_LEXICON,
            pos_supplement: POS_SUPPLEMENT,
            closed_class: CLOSED_CLASS,
            suffix_rules: SUFFIX_RULES,
        }
    }
}

fn parse_err(file: &str, line: usize, message: String) -> LexiconError {
    LexiconError::Parse {
        file: file.to_string(),
        line,
        message,
    }
}

fn tsv(file: &str, raw: &str, columns: usize) -> Result<Vec<(usize, Vec<String>)>, LexiconError> {
    let mut rows = Vec::new();
    for (i, line) in raw.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<String> = line.split('\t').map(|f| f.trim().to_string()).collect();
        if fields.len() != columns || fields.iter().any(String::is_empty) {
            return Err(parse_err(
                file,
                i + 1,
                format!("expected {columns} tab-separated fields"),
            ));
        }
        rows.push((i + 1, fields));
    }
    Ok(rows)
}
