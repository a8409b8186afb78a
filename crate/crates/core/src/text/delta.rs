use serde::{Deserialize, Serialize};

use super::TextError;

/// One edit operation. Serializes as `{"retain": n}`, `{"insert": "text"}`
/// or `{"delete": n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum DeltaOp {
    Retain(usize),
    Insert(String),
    Delete(usize),
}

fn validate(delta: &[DeltaOp]) -> Result<(), TextError> {
    for (i, op) in delta.iter().enumerate() {
        match op {
            DeltaOp::Retain(0) | DeltaOp::Delete(0) => {
                return Err(TextError::MalformedDelta(format!("op {i} has zero length")))
            }
            DeltaOp::Insert(text) if text.is_empty() => {
                return Err(TextError::MalformedDelta(format!("op {i} inserts nothing")))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Applies `delta` to `prev`. Characters left over after the last op are
/// retained.
pub fn apply_delta(prev: &str, delta: &[DeltaOp]) -> Result<String, TextError> {
    validate(delta)?;
    let mut rest = prev.chars();
    let mut out = String::with_capacity(prev.len());
    let mut consumed = 0usize;
    for op in delta {
        match op {
            DeltaOp::Retain(n) => {
                for _ in 0..*n {
                    out.push(rest.next().ok_or_else(|| overrun(consumed, *n))?);
                }
                consumed += n;
            }
            DeltaOp::Delete(n) => {
                for _ in 0..*n {
                    rest.next().ok_or_else(|| overrun(consumed, *n))?;
                }
                consumed += n;
            }
            DeltaOp::Insert(text) => out.push_str(text),
        }
    }
    out.extend(rest);
    Ok(out)
}

fn overrun(at: usize, len: usize) -> TextError {
    TextError::MalformedDelta(format!(
        "op of length {len} at offset {at} runs past the end of the document"
    ))
}

/// Character range of the *new* document touched by `delta`, or `None`
/// for a pure retain. Deletions count as a zero-width touch at their
/// position.
pub fn touched_range(delta: &[DeltaOp]) -> Option<(usize, usize)> {
    let mut pos = 0usize;
    let mut range: Option<(usize, usize)> = None;
    let mut touch = |start: usize, end: usize| {
        range = Some(match range {
            None => (start, end),
            Some((a, b)) => (a.min(start), b.max(end)),
        });
    };
    for op in delta {
        match op {
            DeltaOp::Retain(n) => pos += n,
            DeltaOp::Insert(text) => {
                let n = text.chars().count();
                touch(pos, pos + n);
                pos += n;
            }
            DeltaOp::Delete(_) => touch(pos, pos),
        }
    }
    range
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        assert_eq!(apply_delta("abc", &[DeltaOp::Retain(3)]).unwrap(), "abc");
    }

    #[test]
    fn replace_middle() {
        let delta = [
            DeltaOp::Retain(1),
            DeltaOp::Delete(1),
            DeltaOp::Insert("XY".into()),
        ];
        assert_eq!(apply_delta("abc", &delta).unwrap(), "aXYc");
    }

    #[test]
    fn overrun_is_rejected() {
        let err = apply_delta("abc", &[DeltaOp::Retain(2), DeltaOp::Delete(2)]).unwrap_err();
        assert!(matches!(err, TextError::MalformedDelta(_)));
        assert!(apply_delta("abc", &[DeltaOp::Retain(0)]).is_err());
        assert!(apply_delta("abc", &[DeltaOp::Insert(String::new())]).is_err());
    }

    #[test]
    fn counts_scalar_values() {
        let out = apply_delta("Zoë!", &[DeltaOp::Retain(2), DeltaOp::Delete(1)]).unwrap();
        assert_eq!(out, "Zo!");
    }

    #[test]
    fn wire_format() {
        let json = r#"[{"retain":5},{"insert":"hi"},{"delete":2}]"#;
        let ops: Vec<DeltaOp> = serde_json::from_str(json).unwrap();
        assert_eq!(
            ops,
            vec![
                DeltaOp::Retain(5),
                DeltaOp::Insert("hi".into()),
                DeltaOp::Delete(2)
            ]
        );
        assert_eq!(serde_json::to_string(&ops).unwrap(), json);
        assert!(serde_json::from_str::<DeltaOp>(r#"{"retain":1,"delete":1}"#).is_err());
        assert!(serde_json::from_str::<DeltaOp>(r#"{"keep":1}"#).is_err());
    }

    #[test]
    fn touched_range_tracks_new_offsets() {
        let delta = [
            DeltaOp::Retain(4),
            DeltaOp::Insert("abc".into()),
            DeltaOp::Retain(10),
            DeltaOp::Delete(3),
        ];
        assert_eq!(touched_range(&delta), Some((4, 17)));
        assert_eq!(touched_range(&[DeltaOp::Retain(3)]), None);
    }
}
