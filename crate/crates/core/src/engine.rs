//! Regularity decisions in the convolution semigroup of finitely supported
//! probability measures.
//!
//! A measure `μ` is regular when some `ν` satisfies `μ ⋆ ν ⋆ μ = μ`. The
//! decision runs in three steps:
//!
//! 1. Translate `μ` by a unit so that the identity is in its support.
//!    Point masses are units, so this does not change regularity.
//! 2. A support that contains `e` but is not closed under multiplication
//!    cannot carry a regular measure.
//! 3. On a subgroup support `H` every generalized inverse is supported in
//!    `H`, so regularity is exactly feasibility of `(R·L) β = α` over the
//!    probability simplex, where `L` and `R` are the matrices of left and
//!    right convolution by `μ`.
//!
//! Every `regular` answer carries a certificate checked by direct
//! convolution, independent of the matrix algebra.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement};
use crate::linalg::{
    mat_mul, solve_stochastic, FeasibilityResult, InfeasibilityReason, RationalMatrix,
};
use crate::measure::{closure_witness, convolve, translate, AtomRecord, Measure};
use crate::rational::Rational;
use crate::support::{left_operator, right_operator, OperatorMatrix, SupportTable};

pub const DEFAULT_ORDER_CAP: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Largest element order accepted when checking that the support is
    /// torsion.
    pub order_cap: u64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            order_cap: DEFAULT_ORDER_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Regular,
    NotRegular,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    Certificate,
    SupportNotClosed,
    SystemInfeasible,
    BackendError,
}

/// Exact equalities verified for a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checks {
    /// `μ ⋆ ν ⋆ μ = μ`.
    pub ginverse: bool,
    /// `μ ⋆ μ† ⋆ μ = μ`.
    pub mp_reproduces_subject: bool,
    /// `μ† ⋆ μ ⋆ μ† = μ†`.
    pub mp_reproduces_inverse: bool,
    /// `S(μ†) = S(μ)`, checked when `e ∈ S(μ)`.
    pub support_preserved: Option<bool>,
}

/// `δ_left ⋆ μ ⋆ δ_right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub left: GroupElement,
    pub right: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub subject: Measure,
    pub ginverse: Measure,
    pub moore_penrose: Measure,
    pub checks: Checks,
    /// Translation taking the subject to an identity-supported measure.
    pub normalization: Option<Translation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub reason: Reason,
    pub subject: Measure,
    pub certificate: Option<Certificate>,
    pub normalization: Option<Translation>,
    /// Set by [`theorem_family`]: the subject is `δ_g ⋆ μ ⋆ δ_h`.
    pub family: Option<Translation>,
    pub infeasibility: Option<InfeasibilityReason>,
    pub detail: String,
}

impl Verdict {
    pub fn is_regular(&self) -> bool {
        self.status == Status::Regular
    }
}

pub fn is_generalized_inverse(group: &Group, mu: &Measure, nu: &Measure) -> Result<bool> {
    let mu_nu = convolve(group, mu, nu)?;
    Ok(convolve(group, &mu_nu, mu)? == *mu)
}

/// `ν ⋆ μ ⋆ ν` for a generalized inverse `ν`, after checking both
/// Moore-Penrose equations.
pub fn moore_penrose(group: &Group, mu: &Measure, ginverse: &Measure) -> Result<Measure> {
    if !is_generalized_inverse(group, mu, ginverse)? {
        return Err(Error::NotAGInverse);
    }
    let nu_mu = convolve(group, ginverse, mu)?;
    let dagger = convolve(group, &nu_mu, ginverse)?;
    if !is_generalized_inverse(group, mu, &dagger)? {
        return Err(Error::MpVerificationFailed(
            "mu * mu_dagger * mu != mu".into(),
        ));
    }
    if !is_generalized_inverse(group, &dagger, mu)? {
        return Err(Error::MpVerificationFailed(
            "mu_dagger * mu * mu_dagger != mu_dagger".into(),
        ));
    }
    Ok(dagger)
}

const COMPLETENESS_NOTE: &str = "any generalized inverse of a measure supported on a subgroup H \
     is itself supported in H, so no stochastic solution over H means no generalized inverse at all";

/// Translates `mu` by the inverse of its first atom so that the identity is
/// in the support. `None` when the first atom already is the identity.
pub fn normalize(group: &Group, mu: &Measure) -> Result<(Measure, Option<Translation>)> {
    let identity = group.identity();
    let first = &mu.atoms()[0].0;
    if group.equal(first, &identity)? {
        return Ok((mu.clone(), None));
    }
    let left = group.inverse(first)?;
    let shifted = translate(group, mu, &left, &identity)?;
    Ok((
        shifted,
        Some(Translation {
            left,
            right: identity,
        }),
    ))
}

/// The system `(R·L) β = α` for a measure whose support is a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminingSystem {
    pub table: SupportTable,
    pub alpha: Vec<Rational>,
    pub left: OperatorMatrix,
    pub right: OperatorMatrix,
    pub matrix: RationalMatrix,
}

pub fn determining_system(group: &Group, mu: &Measure) -> Result<DeterminingSystem> {
    let table = SupportTable::build(group, &mu.support())?;
    let alpha = table.weights_of(group, mu)?;
    let left = left_operator(&alpha, &table)?;
    let right = right_operator(&alpha, &table)?;
    let matrix = mat_mul(&right.matrix, &left.matrix)?;
    Ok(DeterminingSystem {
        table,
        alpha,
        left,
        right,
        matrix,
    })
}

/// Decides regularity of `mu`.
pub fn decide_regular(group: &Group, mu: &Measure, options: &EngineOptions) -> Result<Verdict> {
    for g in mu.support() {
        group.order(&g, options.order_cap)?;
    }
    let (normalized, normalization) = normalize(group, mu)?;

    let not_regular = |reason, infeasibility, detail: String| Verdict {
        status: Status::NotRegular,
        reason,
        subject: mu.clone(),
        certificate: None,
        normalization: normalization.clone(),
        family: None,
        infeasibility,
        detail,
    };

    if let Some((x, y, xy)) = closure_witness(group, &normalized)? {
        return Ok(not_regular(
            Reason::SupportNotClosed,
            None,
            format!(
                "{x} * {y} = {xy} leaves the normalized support; a support containing e must \
                 be a subgroup to carry a regular measure"
            ),
        ));
    }

    let system = determining_system(group, &normalized)?;
    match solve_stochastic(&system.matrix, &system.alpha)? {
        FeasibilityResult::Infeasible { reason } => {
            let detail = format!("{reason}; {COMPLETENESS_NOTE}");
            Ok(not_regular(Reason::SystemInfeasible, Some(reason), detail))
        }
        FeasibilityResult::Feasible { witness } => {
            let shifted_inverse = system.table.measure_from_weights(group, &witness)?;
            // μ = δ_x ⋆ μ' and ν' inverts μ', so ν' ⋆ δ_{x⁻¹} inverts μ.
            let ginverse = match &normalization {
                Some(t) => translate(group, &shifted_inverse, &group.identity(), &t.left)?,
                None => shifted_inverse,
            };
            let certificate = certify(group, mu, ginverse, normalization.clone())?;
            Ok(Verdict {
                status: Status::Regular,
                reason: Reason::Certificate,
                subject: mu.clone(),
                certificate: Some(certificate),
                normalization,
                family: None,
                infeasibility: None,
                detail: "generalized inverse verified by direct convolution".into(),
            })
        }
    }
}

/// Validates `ginverse` against `subject` and builds the full certificate.
pub fn certify(
    group: &Group,
    subject: &Measure,
    ginverse: Measure,
    normalization: Option<Translation>,
) -> Result<Certificate> {
    if !is_generalized_inverse(group, subject, &ginverse)? {
        return Err(Error::CertificateInvalid(
            "solver witness fails mu * nu * mu = mu".into(),
        ));
    }
    let moore_penrose = moore_penrose(group, subject, &ginverse)?;
    let identity = group.identity();
    let contains_identity = subject
        .support()
        .iter()
        .map(|g| group.equal(g, &identity))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .any(|b| b);
    let support_preserved = if contains_identity {
        let same = same_support(group, subject, &moore_penrose)?;
        if !same {
            return Err(Error::CertificateInvalid(
                "Moore-Penrose inverse support differs from the subject's".into(),
            ));
        }
        Some(true)
    } else {
        None
    };
    Ok(Certificate {
        subject: subject.clone(),
        ginverse,
        moore_penrose,
        checks: Checks {
            ginverse: true,
            mp_reproduces_subject: true,
            mp_reproduces_inverse: true,
            support_preserved,
        },
        normalization,
    })
}

fn same_support(group: &Group, a: &Measure, b: &Measure) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for g in a.support() {
        let mut found = false;
        for h in b.support() {
            if group.equal(&g, &h)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides regularity of `δ_g ⋆ μ ⋆ δ_h`, recording `(g, h)`.
pub fn theorem_family(
    group: &Group,
    mu: &Measure,
    g: &GroupElement,
    h: &GroupElement,
    options: &EngineOptions,
) -> Result<Verdict> {
    let subject = translate(group, mu, g, h)?;
    let mut verdict = decide_regular(group, &subject, options)?;
    verdict.family = Some(Translation {
        left: g.clone(),
        right: h.clone(),
    });
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeCase {
    /// The chosen `{g_1, ..., g_n}`; the identity is always added.
    pub subset: Vec<String>,
    pub support: Vec<String>,
    pub support_closed: bool,
    pub status: Status,
    pub reason: Reason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeSummary {
    pub cases: usize,
    pub regular: usize,
    pub not_regular: usize,
    pub not_applicable: usize,
    pub closed: usize,
    /// Every case is regular exactly when its support is closed.
    pub regular_iff_closed: bool,
    /// Every uniform measure tried was regular.
    pub all_regular: bool,
    /// Subsets whose uniform measure was not regular.
    pub non_regular_subsets: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub group: String,
    pub group_order: usize,
    pub max_subset_size: usize,
    pub cases: Vec<ProbeCase>,
    pub summary: ProbeSummary,
}

/// Decides every uniform measure `(δ_e + δ_{g_1} + ... + δ_{g_n}) / (n + 1)`
/// over subsets of non-identity elements with `n <= max_subset_size`.
pub fn probe_theorem(
    group: &Group,
    max_subset_size: usize,
    cap: usize,
    options: &EngineOptions,
) -> Result<ProbeReport> {
    let elements = group.elements(cap)?;
    let identity = group.identity();
    let others: Vec<GroupElement> = elements
        .iter()
        .filter(|g| **g != identity)
        .cloned()
        .collect();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for size in 0..=max_subset_size.min(others.len()) {
        combinations(others.len(), size, &mut subsets);
    }

    let cases = subsets
        .par_iter()
        .map(|subset| {
            let chosen: Vec<GroupElement> = subset.iter().map(|&i| others[i].clone()).collect();
            let mu = Measure::uniform_on(group, &chosen)?;
            let support_closed = closure_witness(group, &mu)?.is_none();
            let (status, reason) = match decide_regular(group, &mu, options) {
                Ok(v) => (v.status, v.reason),
                Err(_) => (Status::NotApplicable, Reason::BackendError),
            };
            Ok(ProbeCase {
                subset: chosen.iter().map(|g| g.to_string()).collect(),
                support: mu.support().iter().map(|g| g.to_string()).collect(),
                support_closed,
                status,
                reason,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let count = |s| cases.iter().filter(|c| c.status == s).count();
    let summary = ProbeSummary {
        cases: cases.len(),
        regular: count(Status::Regular),
        not_regular: count(Status::NotRegular),
        not_applicable: count(Status::NotApplicable),
        closed: cases.iter().filter(|c| c.support_closed).count(),
        regular_iff_closed: cases
            .iter()
            .all(|c| (c.status == Status::Regular) == c.support_closed),
        all_regular: cases.iter().all(|c| c.status == Status::Regular),
        non_regular_subsets: cases
            .iter()
            .filter(|c| c.status != Status::Regular)
            .map(|c| c.subset.clone())
            .collect(),
    };
    Ok(ProbeReport {
        group: group.describe(),
        group_order: elements.len(),
        max_subset_size,
        cases,
        summary,
    })
}

/// Appends all `size`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, size: usize, out: &mut Vec<Vec<usize>>) {
    fn go(
        start: usize,
        n: usize,
        size: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, size, current, out);
            current.pop();
        }
    }
    go(0, n, size, &mut Vec::new(), out);
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationRecord {
    pub left: String,
    pub right: String,
}

impl From<&Translation> for TranslationRecord {
    fn from(t: &Translation) -> Self {
        TranslationRecord {
            left: t.left.to_string(),
            right: t.right.to_string(),
        }
    }
}

/// Machine-readable verdict; every weight is an exact `num/den` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictReport {
    pub status: Status,
    pub reason: Reason,
    pub subject: Vec<AtomRecord>,
    pub ginverse: Option<Vec<AtomRecord>>,
    pub moore_penrose: Option<Vec<AtomRecord>>,
    pub normalization: Option<TranslationRecord>,
    pub family: Option<TranslationRecord>,
    pub checks: Option<Checks>,
    pub infeasible_solution: Option<Vec<String>>,
    pub detail: String,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        let cert = v.certificate.as_ref();
        VerdictReport {
            status: v.status,
            reason: v.reason,
            subject: v.subject.to_records(),
            ginverse: cert.map(|c| c.ginverse.to_records()),
            moore_penrose: cert.map(|c| c.moore_penrose.to_records()),
            normalization: v.normalization.as_ref().map(TranslationRecord::from),
            family: v.family.as_ref().map(TranslationRecord::from),
            checks: cert.map(|c| c.checks.clone()),
            infeasible_solution: match &v.infeasibility {
                Some(InfeasibilityReason::UniqueSolutionOutsideSimplex { solution }) => {
                    Some(solution.iter().map(crate::rational::to_exact).collect())
                }
                _ => None,
            },
            detail: v.detail.clone(),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        VerdictReport::from(self).serialize(serializer)
    }
}
