use std::collections::BTreeSet;

use super::Paragraph;

/// Indices of `new` paragraphs left unmatched by a longest common
/// subsequence alignment over content hashes.
///
/// Common prefix and suffix are matched directly; the quadratic table is
/// only built for the middle region that actually differs.
pub fn diff_paragraphs(prev: &[Paragraph], new: &[Paragraph]) -> BTreeSet<usize> {
    let prefix = prev
        .iter()
        .zip(new)
        .take_while(|(a, b)| a.content_hash == b.content_hash)
        .count();
    let max_suffix = prev.len().min(new.len()) - prefix;
    let suffix = prev
        .iter()
        .rev()
        .zip(new.iter().rev())
        .take(max_suffix)
        .take_while(|(a, b)| a.content_hash == b.content_hash)
        .count();

    let old_mid: Vec<u64> = prev[prefix..prev.len() - suffix]
        .iter()
        .map(|p| p.content_hash)
        .collect();
    let new_mid: Vec<u64> = new[prefix..new.len() - suffix]
        .iter()
        .map(|p| p.content_hash)
        .collect();

    let matched = lcs_matches(&old_mid, &new_mid);
    (0..new_mid.len())
        .filter(|j| !matched[*j])
        .map(|j| new[prefix + j].index)
        .collect()
}

/// For each element of `b`, whether it is part of the alignment.
fn lcs_matches(a: &[u64], b: &[u64]) -> Vec<bool> {
    let (n, m) = (a.len(), b.len());
    let mut matched = vec![false; m];
    if n == 0 || m == 0 {
        return matched;
    }
    // table[i][j] = LCS length of a[i..] and b[j..]
    let width = m + 1;
    let mut table = vec![0u32; (n + 1) * width];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            table[i * width + j] = if a[i] == b[j] {
                table[(i + 1) * width + j + 1] + 1
            } else {
                table[(i + 1) * width + j].max(table[i * width + j + 1])
            };
        }
    }
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        if a[i] == b[j] {
            matched[j] = true;
            i += 1;
            j += 1;
        } else if table[(i + 1) * width + j] >= table[i * width + j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    matched
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::split_paragraphs;

    fn paras(doc: &str) -> Vec<Paragraph> {
        split_paragraphs(doc).into_iter().map(|(p, _)| p).collect()
    }

    #[test]
    fn identical_is_empty() {
        let p = paras("a\n\nb\n\nc");
        assert!(diff_paragraphs(&p, &p).is_empty());
    }

    #[test]
    fn append_marks_last() {
        let old = paras("a\n\nb");
        let new = paras("a\n\nb\n\nc");
        assert_eq!(diff_paragraphs(&old, &new), BTreeSet::from([2]));
    }

    #[test]
    fn edit_middle_of_five() {
        let old = paras("a\n\nb\n\nc\n\nd\n\ne");
        let new = paras("a\n\nb\n\nC!\n\nd\n\ne");
        assert_eq!(diff_paragraphs(&old, &new), BTreeSet::from([2]));
    }

    #[test]
    fn moved_paragraph_counts_once() {
        let old = paras("a\n\nb\n\nc");
        let new = paras("b\n\nc\n\na");
        assert_eq!(diff_paragraphs(&old, &new).len(), 1);
    }
}
