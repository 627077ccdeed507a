//! JSON and text renderings of decision and oracle results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use isodet_core::decide::{verify_certificate, XiReport};
use isodet_core::oracle::IsometrySummary;
use isodet_core::{Matrix, RegularizationResult};
use serde::{Deserialize, Serialize};

use crate::document::MatrixDocument;

/// Where a certificate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateSource {
    /// Built from an odd singular block of the regularization.
    Regularization,
    /// Found by exhaustive search over a finite field.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub matrix: MatrixDocument,
    pub source: CertificateSource,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularizationJson {
    pub transform: MatrixDocument,
    pub regular_part: MatrixDocument,
    pub singular_sizes: Vec<usize>,
}

impl RegularizationJson {
    pub fn new(reg: &RegularizationResult) -> RegularizationJson {
        RegularizationJson {
            transform: MatrixDocument::from_matrix(&reg.transform),
            regular_part: MatrixDocument::from_matrix(&reg.regular_part),
            singular_sizes: reg.singular_sizes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideJson {
    pub field: String,
    pub size: usize,
    pub verdict: String,
    pub method: String,
    pub singular_sizes: Vec<usize>,
    pub rank_sequence: Vec<usize>,
    pub odd_block_counts: Vec<usize>,
    pub gamma_used: Option<String>,
    pub certificate: Option<CertificateJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub regularization: Option<RegularizationJson>,
}

impl DecideJson {
    /// `certificate` overrides the report's own certificate when given.
    pub fn new(
        m: &Matrix,
        report: &XiReport,
        certificate: Option<(Matrix, CertificateSource)>,
        emit_regularization: bool,
    ) -> DecideJson {
        let certificate = certificate
            .or_else(|| {
                report
                    .certificate
                    .clone()
                    .map(|c| (c, CertificateSource::Regularization))
            })
            .map(|(c, source)| CertificateJson {
                verified: verify_certificate(m, &c),
                matrix: MatrixDocument::from_matrix(&c),
                source,
            });
        DecideJson {
            field: m.field().to_string(),
            size: m.rows(),
            verdict: report.verdict.to_string(),
            method: report.method.to_string(),
            singular_sizes: report.singular_sizes.clone(),
            rank_sequence: report.rank_sequence.clone(),
            odd_block_counts: report.odd_block_counts.clone(),
            gamma_used: report.gamma_used.as_ref().map(ToString::to_string),
            certificate,
            regularization: if emit_regularization {
                report.regularization.as_ref().map(RegularizationJson::new)
            } else {
                None
            },
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |v: &[usize]| format!("{v:?}");
        writeln!(out, "verdict: {}", self.verdict).unwrap();
        writeln!(out, "method: {}", self.method).unwrap();
        writeln!(out, "field: {}", self.field).unwrap();
        writeln!(out, "size: {}", self.size).unwrap();
        writeln!(out, "singular_sizes: {}", list(&self.singular_sizes)).unwrap();
        writeln!(out, "rank_sequence: {}", list(&self.rank_sequence)).unwrap();
        writeln!(out, "odd_block_counts: {}", list(&self.odd_block_counts)).unwrap();
        if let Some(g) = &self.gamma_used {
            writeln!(out, "gamma_used: {g}").unwrap();
        }
        if let Some(c) = &self.certificate {
            let status = if c.verified { "VERIFIED" } else { "REJECTED" };
            writeln!(out, "certificate ({:?}, {status}):", c.source).unwrap();
            out.push_str(&indent(&c.matrix));
        }
        if let Some(r) = &self.regularization {
            writeln!(out, "regularization transform:").unwrap();
            out.push_str(&indent(&r.transform));
            writeln!(out, "regular part:").unwrap();
            out.push_str(&indent(&r.regular_part));
        }
        out
    }
}

fn indent(doc: &MatrixDocument) -> String {
    doc.rows
        .iter()
        .map(|r| format!("  [{}]\n", r.join(", ")))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleJson {
    pub field: String,
    pub size: usize,
    pub group_order: u64,
    /// Determinant residue → number of isometries.
    pub det_counts: BTreeMap<String, u64>,
    pub all_det_one: bool,
    pub verdict: String,
}

impl OracleJson {
    pub fn new(m: &Matrix, s: &IsometrySummary) -> OracleJson {
        OracleJson {
            field: m.field().to_string(),
            size: m.rows(),
            group_order: s.group_order,
            det_counts: s
                .det_counts
                .iter()
                .map(|(d, c)| (d.to_string(), *c))
                .collect(),
            all_det_one: s.all_det_one(),
            verdict: s.verdict().to_string(),
        }
    }

    pub fn to_text(&self) -> String {
        let tally: Vec<String> = self
            .det_counts
            .iter()
            .map(|(d, c)| format!("{d}: {c}"))
            .collect();
        format!(
            "verdict: {}\ngroup_order: {}\ndeterminants: {{{}}}\nall_det_one: {}\n",
            self.verdict,
            self.group_order,
            tally.join(", "),
            self.all_det_one
        )
    }
}
