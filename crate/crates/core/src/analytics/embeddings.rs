use std::collections::HashMap;
use std::path::Path;

/// Word vectors loaded from the plain-text format: a `count dimension`
/// header line followed by one `word v1 ... vd` record per line.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    entries: HashMap<String, Vec<f64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum EmbeddingError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line 1: header must be \"count dimension\", found {0:?}")]
    Header(String),
    #[error("line {line}: expected {expected} components, found {found}")]
    Dimension {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header declares {declared} vectors but the file has {found}")]
    Count { declared: usize, found: usize },
    #[error("the table is empty")]
    Empty,
}

impl EmbeddingTable {
    pub fn load(path: &Path) -> Result<Self, EmbeddingError> {
        let text = std::fs::read_to_string(path).map_err(|source| EmbeddingError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses and validates the text format. Words are case-folded; on a
    /// clash after folding the first vector wins.
    pub fn parse(text: &str) -> Result<Self, EmbeddingError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(EmbeddingError::Empty)?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (declared, dimension) = match fields.as_slice() {
            [c, d] => match (c.parse::<usize>(), d.parse::<usize>()) {
                (Ok(c), Ok(d)) if d > 0 => (c, d),
                _ => return Err(EmbeddingError::Header(header.to_string())),
            },
            _ => return Err(EmbeddingError::Header(header.to_string())),
        };
        let mut entries = HashMap::new();
        let mut found = 0;
        for (i, line) in lines {
            let mut parts = line.split_whitespace();
            let word = parts.next().expect("non-blank line");
            let vector = parts
                .map(|v| {
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| EmbeddingError::Parse {
                            line: i + 1,
                            message: format!("bad component {v:?}"),
                        })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            if vector.len() != dimension {
                return Err(EmbeddingError::Dimension {
                    line: i + 1,
                    expected: dimension,
                    found: vector.len(),
                });
            }
            found += 1;
            entries.entry(word.to_lowercase()).or_insert(vector);
        }
        if found != declared {
            return Err(EmbeddingError::Count { declared, found });
        }
        if entries.is_empty() {
            return Err(EmbeddingError::Empty);
        }
        Ok(EmbeddingTable { dimension, entries })
    }

    /// Builds a table in memory; every vector must have `dimension` parts.
    pub fn from_entries<I, S>(dimension: usize, entries: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: AsRef<str>,
    {
        let mut map = HashMap::new();
        for (i, (word, vector)) in entries.into_iter().enumerate() {
            if vector.len() != dimension {
                return Err(EmbeddingError::Dimension {
                    line: i + 1,
                    expected: dimension,
                    found: vector.len(),
                });
            }
            map.entry(word.as_ref().to_lowercase()).or_insert(vector);
        }
        if map.is_empty() {
            return Err(EmbeddingError::Empty);
        }
        Ok(EmbeddingTable {
            dimension,
            entries: map,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.entries.get(&word.to_lowercase()).map(Vec::as_slice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_folds_case() {
        let t = EmbeddingTable::parse("2 3\nKind 1 0 0\nbrave 0 1 0.5\n").unwrap();
        assert_eq!(t.dimension(), 3);
        assert_eq!(t.get("kind"), Some(&[1.0, 0.0, 0.0][..]));
        assert_eq!(t.get("BRAVE").unwrap()[2], 0.5);
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = EmbeddingTable::parse("2 3\nkind 1 0 0\nbrave 0 1\n").unwrap_err();
        assert!(matches!(err, EmbeddingError::Dimension { line: 3, expected: 3, found: 2 }));
    }

    #[test]
    fn header_and_count_are_checked() {
        assert!(matches!(
            EmbeddingTable::parse("kind 1 0\n").unwrap_err(),
            EmbeddingError::Header(_)
        ));
        assert!(matches!(
            EmbeddingTable::parse("3 2\na 1 0\nb 0 1\n").unwrap_err(),
            EmbeddingError::Count { declared: 3, found: 2 }
        ));
        assert!(matches!(EmbeddingTable::parse("").unwrap_err(), EmbeddingError::Empty));
        assert!(matches!(
            EmbeddingTable::parse("1 2\na 1 NaN\n").unwrap_err(),
            EmbeddingError::Parse { line: 2, .. }
        ));
    }
}
