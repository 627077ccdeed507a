//! Decides whether every isometry of the bilinear form `M` has determinant 1.
//!
//! The main path:
//!
//! 1. If `M - M^T` is nonsingular, every isometry is symplectic for the skew
//!    part and the answer is yes.
//! 2. Otherwise regularize `M ≅ B ⊕ J_{n_1}(0) ⊕ …`. An odd `n_j` gives a
//!    determinant `-1` isometry, returned as a certificate.
//! 3. Otherwise the answer is yes iff the cosquare `B^{-T} B` has no Jordan
//!    block `J_{2k+1}(1)`. With `r_k = rank((B^{-T}B - I)^k)` the number of such
//!    blocks is `r_{2k} - 2 r_{2k+1} + r_{2k+2}`.
//!
//! [`decide_gamma_shift`] is an independent route through the pencil
//! `(M^T, M)`: a singular pencil means an odd singular summand; otherwise the
//! eigenvalue-1 structure of the pencil is read off
//! `N = (M^T + γM)^{-1} M` at `μ = (1 + γ)^{-1}`.

use std::fmt;

use thiserror::Error;

use crate::blocks::cosquare;
use crate::exactmat::{det_poly, ExactError, Field, Matrix, Scalar};
use crate::regularize::{congruent, regularize, RegularizationResult, RegularizeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("no admissible shift: M^T + γM is singular for every γ ≠ -1 in {0}")]
    GammaExhausted(Field),
    #[error("no odd singular block to build a certificate from")]
    NoOddBlock,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<RegularizeError> for DecideError {
    fn from(e: RegularizeError) -> Self {
        match e {
            RegularizeError::Exact(e) => DecideError::Exact(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    InXi,
    NotInXi,
}

impl Verdict {
    pub fn from_bool(all_det_one: bool) -> Verdict {
        if all_det_one {
            Verdict::InXi
        } else {
            Verdict::NotInXi
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::InXi => "IN_XI",
            Verdict::NotInXi => "NOT_IN_XI",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    SkewFastPath,
    Regularize,
    GammaShift,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::SkewFastPath => "SKEW_FAST_PATH",
            Method::Regularize => "REGULARIZE",
            Method::GammaShift => "GAMMA_SHIFT",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict plus every invariant computed on the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiReport {
    pub verdict: Verdict,
    pub method: Method,
    pub singular_sizes: Vec<usize>,
    /// `r_0, r_1, …`; empty when the rank step did not run.
    pub rank_sequence: Vec<usize>,
    /// `c_k = r_{2k} - 2 r_{2k+1} + r_{2k+2}` for `k = 0 … ⌊(n-1)/2⌋`.
    pub odd_block_counts: Vec<usize>,
    pub gamma_used: Option<Scalar>,
    /// An isometry of determinant `-1`, when one was constructed.
    pub certificate: Option<Matrix>,
    pub regularization: Option<RegularizationResult>,
}

impl XiReport {
    fn new(verdict: Verdict, method: Method) -> XiReport {
        XiReport {
            verdict,
            method,
            singular_sizes: Vec::new(),
            rank_sequence: Vec::new(),
            odd_block_counts: Vec::new(),
            gamma_used: None,
            certificate: None,
            regularization: None,
        }
    }
}

fn require_square(m: &Matrix) -> Result<(), DecideError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(ExactError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into())
    }
}

fn require_odd_characteristic(m: &Matrix) -> Result<(), DecideError> {
    if m.field().characteristic() == 2 {
        return Err(DecideError::UnsupportedField(
            "characteristic 2".to_string(),
        ));
    }
    Ok(())
}

/// Fast path, then the regularization path.
pub fn decide(m: &Matrix) -> Result<XiReport, DecideError> {
    require_square(m)?;
    require_odd_characteristic(m)?;
    if let Some(verdict) = skew_fast_path(m)? {
        return Ok(XiReport::new(verdict, Method::SkewFastPath));
    }
    decide_regularized(m)
}

/// Steps 2 and 3 only, without the skew-symmetric shortcut.
pub fn decide_regularized(m: &Matrix) -> Result<XiReport, DecideError> {
    require_square(m)?;
    require_odd_characteristic(m)?;
    let n = m.rows();
    let reg = regularize(m)?;
    let mut report = XiReport::new(Verdict::InXi, Method::Regularize);
    report.singular_sizes = reg.singular_sizes.clone();
    if reg.has_odd_block() {
        report.verdict = Verdict::NotInXi;
        report.certificate = Some(certificate_singular(m, &reg)?);
    } else {
        let (ranks, counts) = unipotent_profile(&reg.regular_part, n)?;
        if counts.iter().any(|&c| c > 0) {
            report.verdict = Verdict::NotInXi;
        }
        report.rank_sequence = ranks;
        report.odd_block_counts = counts;
    }
    report.regularization = Some(reg);
    Ok(report)
}

/// `Some(IN_XI)` when `M - M^T` is nonsingular, otherwise no decision.
pub fn skew_fast_path(m: &Matrix) -> Result<Option<Verdict>, DecideError> {
    require_square(m)?;
    let skew = m - &m.transpose();
    Ok((skew.rank() == m.rows()).then_some(Verdict::InXi))
}

/// Rank sequence `r_k = rank((B^{-T}B - I)^k)` for `k = 0 … size(B)` and the
/// counts `c_k` of Jordan blocks `J_{2k+1}(1)` of the cosquare for
/// `k = 0 … ⌊(size(B)-1)/2⌋`.
pub fn odd_unipotent_counts(b: &Matrix) -> Result<(Vec<usize>, Vec<usize>), DecideError> {
    require_square(b)?;
    let size = b.rows();
    let (mut ranks, counts) = unipotent_profile(b, size)?;
    ranks.truncate(size + 1);
    Ok((ranks, counts))
}

/// Number of `c_k` entries reported for a matrix of size `n`.
fn count_span(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (n - 1) / 2 + 1
    }
}

fn unipotent_profile(b: &Matrix, n: usize) -> Result<(Vec<usize>, Vec<usize>), DecideError> {
    let c = cosquare(b)?;
    let ranks = c.power_rank_sequence(&b.field().one(), 2 * count_span(n))?;
    let counts = odd_counts(&ranks, count_span(n));
    Ok((ranks, counts))
}

/// `c_k = r_{2k} - 2 r_{2k+1} + r_{2k+2}`. The rank sequence must reach index `2·span`.
fn odd_counts(ranks: &[usize], span: usize) -> Vec<usize> {
    (0..span)
        .map(|k| {
            let c = ranks[2 * k] as i64 - 2 * ranks[2 * k + 1] as i64 + ranks[2 * k + 2] as i64;
            usize::try_from(c).expect("rank sequences of powers are convex")
        })
        .collect()
}

/// Pencil route. Fails with [`DecideError::GammaExhausted`] when the field is
/// too small to offer an admissible shift.
pub fn decide_gamma_shift(m: &Matrix) -> Result<XiReport, DecideError> {
    require_square(m)?;
    require_odd_characteristic(m)?;
    let n = m.rows();
    let field = m.field();
    let mt = m.transpose();
    let pencil = det_poly(&mt, m)?;
    if pencil.is_zero() {
        return Ok(XiReport::new(Verdict::NotInXi, Method::GammaShift));
    }

    let minus_one = field.from_i64(-1);
    let candidates: Box<dyn Iterator<Item = Scalar>> = match field.order() {
        Some(p) => Box::new((0..p as i64).map(move |g| field.from_i64(g))),
        None => Box::new((0..).map(move |g| field.from_i64(g))),
    };
    let gamma = candidates
        .filter(|g| *g != minus_one)
        .find(|g| !pencil.eval(g).is_zero())
        .ok_or(DecideError::GammaExhausted(field))?;

    let shifted = &mt + &m.scale(&gamma);
    let pencil_matrix = &shifted.inverse()? * m;
    let mu = (&field.one() + &gamma).inv().expect("γ ≠ -1");
    let ranks = pencil_matrix.power_rank_sequence(&mu, 2 * count_span(n))?;
    let counts = odd_counts(&ranks, count_span(n));

    let mut report = XiReport::new(
        Verdict::from_bool(counts.iter().all(|&c| c == 0)),
        Method::GammaShift,
    );
    report.rank_sequence = ranks;
    report.odd_block_counts = counts;
    report.gamma_used = Some(gamma);
    Ok(report)
}

/// `S D S^{-1}` where `S` is the regularizing transform and `D` negates the
/// coordinates of the first odd singular block. It fixes `M` and has determinant `-1`.
pub fn certificate_singular(m: &Matrix, reg: &RegularizationResult) -> Result<Matrix, DecideError> {
    let field = m.field();
    let mut offset = reg.regular_part.rows();
    let mut block = None;
    for &size in &reg.singular_sizes {
        if size % 2 == 1 {
            block = Some(offset..offset + size);
            break;
        }
        offset += size;
    }
    let block = block.ok_or(DecideError::NoOddBlock)?;
    let diag: Vec<Scalar> = (0..m.rows())
        .map(|i| {
            if block.contains(&i) {
                field.from_i64(-1)
            } else {
                field.one()
            }
        })
        .collect();
    let d = Matrix::diagonal(field, &diag);
    let s = &reg.transform;
    Ok(&(s * &d) * &s.inverse()?)
}

/// True iff `S^T M S = M`, `S` is nonsingular and `det S = -1`.
pub fn verify_certificate(m: &Matrix, s: &Matrix) -> bool {
    if !m.is_square() || (s.rows(), s.cols()) != (m.rows(), m.cols()) || s.field() != m.field() {
        return false;
    }
    let Ok(det) = s.det() else { return false };
    det == m.field().from_i64(-1) && congruent(s, m) == *m
}
