//! Text formats: the solutions file and the heatmap CSV.
//!
//! A solutions file has one line per class, `n gamma orbit_size sq...`
//! listing the canonical member; lines starting with `#` are comments.
//! A heatmap is `n` CSV rows of counts followed by `total,<labeled>`.

use std::fmt::Write as _;

use qdom_core::enumerate::{frequency_matrix, FrequencyMatrix};
use qdom_core::{Board, SolutionClass, SquareSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("file is empty")]
    Empty,
}

fn perr(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionsFile {
    pub n: usize,
    pub gamma: usize,
    pub classes: Vec<SolutionClass>,
}

impl SolutionsFile {
    pub fn labeled(&self) -> usize {
        self.classes.iter().map(|c| c.orbit_size()).sum()
    }
}

pub fn write_solutions(n: usize, gamma: usize, classes: &[SolutionClass]) -> String {
    let mut out = String::new();
    let labeled: usize = classes.iter().map(|c| c.orbit_size()).sum();
    let _ = writeln!(
        out,
        "# n={n} gamma={gamma} classes={} labeled={labeled}",
        classes.len()
    );
    for c in classes {
        let _ = write!(out, "{n} {gamma} {}", c.orbit_size());
        for s in c.canonical.iter() {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
    }
    out
}

/// Parses and re-derives every class; a stated orbit size that disagrees
/// with the recomputed orbit, or a non-canonical member, is an error.
pub fn parse_solutions(text: &str) -> Result<SolutionsFile, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut classes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| perr(line_no, format!("bad number `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        if nums.len() < 3 {
            return Err(perr(line_no, "expected `n gamma orbit_size squares...`"));
        }
        let (n, gamma, orbit) = (nums[0], nums[1], nums[2]);
        match header {
            None => header = Some((n, gamma)),
            Some(h) if h != (n, gamma) => {
                return Err(perr(line_no, "n or gamma differs from earlier lines"))
            }
            _ => {}
        }
        let squares = nums[3..].to_vec();
        if squares.len() != gamma {
            return Err(perr(
                line_no,
                format!("expected {gamma} squares, found {}", squares.len()),
            ));
        }
        let board = Board::new(n).map_err(|e| perr(line_no, e.to_string()))?;
        let set = SquareSet::new(&board, squares).map_err(|e| perr(line_no, e.to_string()))?;
        let class =
            SolutionClass::from_set(&board, &set).map_err(|e| perr(line_no, e.to_string()))?;
        if class.canonical != set {
            return Err(perr(
                line_no,
                format!("{set} is not canonical; expected {}", class.canonical),
            ));
        }
        if class.orbit_size() != orbit {
            return Err(perr(
                line_no,
                format!("orbit size {orbit} stated, {} computed", class.orbit_size()),
            ));
        }
        classes.push(class);
    }
    let (n, gamma) = header.ok_or(FormatError::Empty)?;
    Ok(SolutionsFile { n, gamma, classes })
}

pub fn write_heatmap(m: &FrequencyMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let _ = writeln!(out, "total,{}", m.total());
    out
}

pub fn heatmap_for(board: &Board, classes: &[SolutionClass]) -> String {
    write_heatmap(&frequency_matrix(board, classes))
}

/// Reads a heatmap back. Row count fixes `n`; every row must have `n` cells.
pub fn parse_heatmap(text: &str) -> Result<FrequencyMatrix, FormatError> {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut total = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if total.is_some() {
            return Err(perr(line_no, "content after total line"));
        }
        if let Some(t) = line.strip_prefix("total,") {
            total = Some(
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| perr(line_no, "bad total"))?,
            );
            continue;
        }
        let row = line
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u64>()
                    .map_err(|_| perr(line_no, format!("bad count `{c}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let total = total.ok_or_else(|| perr(text.lines().count(), "missing total line"))?;
    let n = rows.len();
    if n == 0 {
        return Err(FormatError::Empty);
    }
    if let Some(i) = rows.iter().position(|r| r.len() != n) {
        return Err(perr(i + 1, format!("expected {n} cells")));
    }
    let board = Board::new(n).map_err(|e| perr(1, e.to_string()))?;
    FrequencyMatrix::from_counts(&board, rows.concat(), total).map_err(|e| perr(1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qdom_core::encode::EncodingConfig;
    use qdom_core::enumerate::enumerate_embedded;

    fn four() -> (Board, Vec<SolutionClass>) {
        let b = Board::new(4).unwrap();
        let e = enumerate_embedded(&b, 2, &EncodingConfig::default()).unwrap();
        (b, e.classes)
    }

    #[test]
    fn solutions_round_trip() {
        let (_, classes) = four();
        let text = write_solutions(4, 2, &classes);
        assert!(text.starts_with("# n=4 gamma=2 classes=3 labeled=12"));
        let parsed = parse_solutions(&text).unwrap();
        assert_eq!(parsed.classes, classes);
        assert_eq!(parsed.labeled(), 12);
    }

    #[test]
    fn solutions_rejects_bad_lines() {
        assert_eq!(parse_solutions("# nothing\n"), Err(FormatError::Empty));
        assert!(parse_solutions("4 2 4 1\n").is_err());
        assert!(parse_solutions("3 1 2 5\n").is_err());
        assert!(parse_solutions("3 1 4 9\n").is_err());
        assert!(parse_solutions("3 1 1 x\n").is_err());
        assert!(parse_solutions("3 1 1 5\n4 1 1 1\n").is_err());
    }

    #[test]
    fn heatmap_round_trip() {
        let (b, classes) = four();
        let text = heatmap_for(&b, &classes);
        assert_eq!(text.lines().count(), 5);
        assert!(text.ends_with("total,12\n"));
        let m = parse_heatmap(&text).unwrap();
        assert_eq!(m.total(), 12);
        assert_eq!(m.counts().iter().sum::<u64>(), 24);
        assert_eq!(write_heatmap(&m), text);
    }

    #[test]
    fn heatmap_rejects_ragged() {
        assert!(parse_heatmap("1,2\n3\ntotal,1\n").is_err());
        assert!(parse_heatmap("1\n").is_err());
        assert!(parse_heatmap("total,1\n1\n").is_err());
    }
}
