//! Matrix interchange: a JSON document or a plain text block.
//!
//! JSON: `{"field": "Q", "rows": [["0", "1"], ["-1", "0"]]}`.
//! Text: a header line `n field`, then `n` lines of whitespace-separated entries.
//! Entries are strings so rationals such as `2/7` stay exact.

use std::fs;
use std::io::Read;

use isodet_core::{ExactError, Field, Matrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid text document: {0}")]
    Text(String),
    #[error("matrix must be square, got {rows} rows and a row of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub field: String,
    pub rows: Vec<Vec<String>>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &Matrix) -> MatrixDocument {
        MatrixDocument {
            field: m.field().to_string(),
            rows: m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn field(&self) -> Result<Field, DocumentError> {
        Ok(self.field.parse()?)
    }

    /// Parses every entry in the declared field. The matrix must be square.
    pub fn to_matrix(&self) -> Result<Matrix, DocumentError> {
        let field = self.field()?;
        let n = self.rows.len();
        if let Some(bad) = self.rows.iter().find(|r| r.len() != n) {
            return Err(DocumentError::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| field.parse(e)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_rows(field, rows)?)
    }

    /// Reads JSON when the input starts with `{`, the text format otherwise.
    pub fn parse(input: &str) -> Result<MatrixDocument, DocumentError> {
        let trimmed = input.trim_start();
        if trimmed.starts_with('{') {
            Ok(serde_json::from_str(trimmed)?)
        } else {
            parse_text(input)
        }
    }

    /// Reads a file, or standard input for `-`.
    pub fn read(path: &str) -> Result<MatrixDocument, DocumentError> {
        let io = |source| DocumentError::Io {
            path: path.to_string(),
            source,
        };
        let text = if path == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(io)?;
            s
        } else {
            fs::read_to_string(path).map_err(io)?
        };
        MatrixDocument::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows.len(), self.field);
        for r in &self.rows {
            out.push_str(&r.join(" "));
            out.push('\n');
        }
        out
    }
}

fn parse_text(input: &str) -> Result<MatrixDocument, DocumentError> {
    let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| DocumentError::Text("empty input".into()))?;
    let mut parts = header.split_whitespace();
    let (Some(n), Some(field), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(DocumentError::Text(format!(
            "header must be `n field`, got {header:?}"
        )));
    };
    let n: usize = n
        .parse()
        .map_err(|_| DocumentError::Text(format!("bad size {n:?}")))?;
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect();
    if rows.len() != n {
        return Err(DocumentError::Text(format!(
            "expected {n} rows, found {}",
            rows.len()
        )));
    }
    Ok(MatrixDocument {
        field: field.to_string(),
        rows,
    })
}
