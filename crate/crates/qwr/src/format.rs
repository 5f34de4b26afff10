//! On-disk formats: the JSON code file, classical alist files and the
//! plain-text matrix format.
//!
//! Code files look like
//!
//! ```json
//! {
//!   "n": 7,
//!   "hx": [[3,4,5,6], ...],
//!   "hz": [[3,4,5,6], ...],
//!   "meta": {}
//! }
//! ```
//!
//! Writers emit one row per line with sorted indices, so writing the result
//! of a read reproduces the input bytes.

use std::fmt::Write as _;
use std::path::Path;

use qwr_core::{CodeError, CssCode, SparseBitMatrix};
use serde::Deserialize;
use serde_json::{Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Code(#[from] CodeError),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// A code together with its free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeFile {
    pub code: CssCode,
    pub meta: Map<String, Value>,
}

impl CodeFile {
    pub fn new(code: CssCode) -> Self {
        Self { code, meta: Map::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCode {
    n: usize,
    hx: Vec<Vec<usize>>,
    hz: Vec<Vec<usize>>,
    #[serde(default)]
    meta: Map<String, Value>,
}

pub fn code_from_json(text: &str) -> Result<CodeFile, FormatError> {
    let raw: RawCode = serde_json::from_str(text).map_err(|source| FormatError::Json { path: "<input>".into(), source })?;
    let code = CssCode::from_rows(raw.n, raw.hx, raw.hz)?;
    Ok(CodeFile { code, meta: raw.meta })
}

fn write_rows(out: &mut String, m: &SparseBitMatrix) {
    if m.num_rows() == 0 {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, row) in m.rows().enumerate() {
        out.push_str("    [");
        for (j, c) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{c}");
        }
        out.push(']');
        out.push_str(if i + 1 < m.num_rows() { ",\n" } else { "\n" });
    }
    out.push_str("  ]");
}

pub fn code_to_json(file: &CodeFile) -> String {
    let mut out = String::new();
    let _ = write!(out, "{{\n  \"n\": {},\n  \"hx\": ", file.code.n());
    write_rows(&mut out, file.code.hx());
    out.push_str(",\n  \"hz\": ");
    write_rows(&mut out, file.code.hz());
    out.push_str(",\n  \"meta\": ");
    out.push_str(&serde_json::to_string(&file.meta).expect("metadata map serializes"));
    out.push_str("\n}\n");
    out
}

/// Reads a classical parity-check matrix in alist form as a code with X-checks only.
pub fn code_from_alist(text: &str) -> Result<CssCode, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let mut numbers = |expect: Option<usize>| -> Result<(usize, Vec<usize>), FormatError> {
        let (no, line) = lines.next().ok_or_else(|| parse_err(0, "unexpected end of file"))?;
        let v = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(no, format!("not a number: {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        match expect {
            Some(k) if v.len() != k => Err(parse_err(no, format!("expected {k} numbers, found {}", v.len()))),
            _ => Ok((no, v)),
        }
    };
    let (_, dims) = numbers(Some(2))?;
    let (n, m) = (dims[0], dims[1]);
    let (_, max) = numbers(Some(2))?;
    let (_, col_w) = numbers(Some(n))?;
    let (_, row_w) = numbers(Some(m))?;
    let mut from_cols = vec![Vec::new(); m];
    for c in 0..n {
        let (no, entries) = numbers(None)?;
        if entries.len() > max[0].max(col_w[c]) {
            return Err(parse_err(no, "column list longer than its declared weight"));
        }
        let ones: Vec<usize> = entries.into_iter().filter(|&r| r != 0).collect();
        if ones.len() != col_w[c] {
            return Err(parse_err(no, format!("column {c} lists {} checks, weight says {}", ones.len(), col_w[c])));
        }
        for r in ones {
            if r > m {
                return Err(parse_err(no, format!("check index {r} exceeds {m}")));
            }
            from_cols[r - 1].push(c);
        }
    }
    let mut rows = Vec::with_capacity(m);
    for (r, &weight) in row_w.iter().enumerate() {
        let (no, entries) = numbers(None)?;
        let mut ones: Vec<usize> = entries.into_iter().filter(|&c| c != 0).map(|c| c - 1).collect();
        if ones.len() != weight {
            return Err(parse_err(no, format!("row {r} lists {} bits, weight says {weight}", ones.len())));
        }
        ones.sort_unstable();
        if ones != from_cols[r] {
            return Err(parse_err(no, format!("row {r} disagrees with the column lists")));
        }
        rows.push(ones);
    }
    Ok(CssCode::from_rows(n, rows, Vec::new())?)
}

/// Serializes a matrix as `rows cols` followed by one line of column indices per row.
pub fn matrix_to_text(m: &SparseBitMatrix) -> String {
    let mut out = format!("{} {}\n", m.num_rows(), m.num_cols());
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn matrix_from_text(text: &str) -> Result<SparseBitMatrix, FormatError> {
    let (header, body) = text.split_once('\n').unwrap_or((text, ""));
    let dims: Vec<usize> = header.split_whitespace().map(|t| t.parse().map_err(|_| parse_err(1, format!("bad header {header:?}")))).collect::<Result<_, _>>()?;
    let [rows, cols] = dims[..] else {
        return Err(parse_err(1, "header must be \"rows cols\""));
    };
    let mut lines: Vec<&str> = body.split('\n').collect();
    if body.ends_with('\n') {
        lines.pop();
    }
    if rows == 0 && lines == [""] {
        lines.clear();
    }
    if lines.len() != rows {
        return Err(parse_err(lines.len().min(rows) + 2, format!("expected {rows} rows, found {}", lines.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, line) in lines.into_iter().enumerate() {
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(i + 2, format!("not an index: {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if row.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(i + 2, "indices must be strictly increasing"));
        }
        out.push(row);
    }
    SparseBitMatrix::new(cols, out).map_err(|e| parse_err(0, e.to_string()))
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

/// Reads a code file; paths ending in `.alist` are parsed as alist.
pub fn read_code(path: &Path) -> Result<CodeFile, FormatError> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("alist")) {
        return Ok(CodeFile::new(code_from_alist(&text)?).with_meta("source", "alist"));
    }
    code_from_json(&text).map_err(|e| match e {
        FormatError::Json { source, .. } => FormatError::Json { path: path.display().to_string(), source },
        other => other,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    std::fs::write(path, text).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

pub fn write_code(path: &Path, file: &CodeFile) -> Result<(), FormatError> {
    write_text(path, &code_to_json(file))
}

/// Reads JSON from `path` into any deserializable type.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    serde_json::from_str(&read(path)?).map_err(|source| FormatError::Json { path: path.display().to_string(), source })
}

pub fn to_json_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use qwr_core::fixtures;

    #[test]
    fn json_round_trip_is_byte_stable() {
        let file = CodeFile::new(fixtures::steane()).with_meta("name", "steane");
        let text = code_to_json(&file);
        let back = code_from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(code_to_json(&back), text);
    }

    #[test]
    fn json_sorts_indices_on_read() {
        let f = code_from_json(r#"{"n":3,"hx":[[2,0]],"hz":[]}"#).unwrap();
        assert_eq!(f.code.hx().row(0), &[0, 2]);
        assert!(code_to_json(&f).contains("[0,2]"));
    }

    #[test]
    fn json_rejects_out_of_range_and_unknown_fields() {
        assert!(matches!(code_from_json(r#"{"n":2,"hx":[[2]],"hz":[]}"#), Err(FormatError::Code(_))));
        assert!(matches!(code_from_json(r#"{"n":2,"hx":[],"hz":[],"extra":1}"#), Err(FormatError::Json { .. })));
    }

    #[test]
    fn empty_matrices_serialize_as_empty_arrays() {
        let code = CssCode::from_rows(2, vec![], vec![]).unwrap();
        let text = code_to_json(&CodeFile::new(code));
        assert!(text.contains("\"hx\": []"));
        assert_eq!(code_from_json(&text).unwrap().code.n(), 2);
    }

    const HAMMING_ALIST: &str = "7 3\n3 4\n1 1 1 2 2 2 3\n4 4 4\n1 0 0\n2 0 0\n3 0 0\n1 2 0\n1 3 0\n2 3 0\n1 2 3\n1 4 5 7 \n4 6 7 2\n3 5 6 7\n";

    #[test]
    fn alist_reads_an_x_only_code() {
        let code = code_from_alist(HAMMING_ALIST).unwrap();
        assert_eq!(code.n(), 7);
        assert_eq!(code.hx().row(0), &[0, 3, 4, 6]);
        assert_eq!(code.hx().row(1), &[1, 3, 5, 6]);
        assert_eq!(code.hz().num_rows(), 0);
        assert_eq!(code.k(), 4);
    }

    #[test]
    fn alist_rejects_inconsistent_lists() {
        let bad = HAMMING_ALIST.replace("3 5 6 7", "3 5 6 1");
        assert!(matches!(code_from_alist(&bad), Err(FormatError::Parse { .. })));
        assert!(code_from_alist("7 3\n3 4\n").is_err());
    }

    #[test]
    fn matrix_text_round_trip_with_zero_rows() {
        let m = SparseBitMatrix::new(5, vec![vec![0, 4], vec![], vec![1, 2, 3]]).unwrap();
        let text = matrix_to_text(&m);
        assert_eq!(text, "3 5\n0 4\n\n1 2 3\n");
        assert_eq!(matrix_from_text(&text).unwrap(), m);
        let trailing_zero = SparseBitMatrix::new(2, vec![vec![1], vec![]]).unwrap();
        assert_eq!(matrix_to_text(&trailing_zero), "2 2\n1\n\n");
        assert_eq!(matrix_from_text("2 2\n1\n\n").unwrap(), trailing_zero);
        assert_eq!(matrix_from_text("0 4\n").unwrap(), SparseBitMatrix::zeros(0, 4));
    }

    #[test]
    fn matrix_text_rejects_malformed_input() {
        assert!(matrix_from_text("2 3\n0 1\n").is_err());
        assert!(matrix_from_text("1 3\n3\n").is_err());
        assert!(matrix_from_text("1 3\n1 0\n").is_err());
        assert!(matrix_from_text("1 3\n0\n2\n").is_err());
        assert!(matrix_from_text("x 3\n").is_err());
    }
}
