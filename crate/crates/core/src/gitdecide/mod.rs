//! Semistability and stability verdicts with certificates, the isotropic
//! filtration, the graded module and S-equivalence.
//!
//! Over a prime field every subspace is enumerated, so verdicts are exact.
//! Over ℚ a verdict is either certified (by a rational witness, by reduction
//! modulo a prime, or by a definite combination of the forms) or reported as
//! `no_destabilizer_found`.

mod graded;
mod rational;

use std::fmt;

use crate::error::{Error, Result};
use crate::hilbertmumford::{destabilizing_1ps, mu, OneParamSubgroup, Weight};
use crate::linalg::{all_subspaces, Subspace};
use crate::sigmamod::SigmaModule;

pub use graded::{graded, iso_filtration, s_equivalent, Filtration, GradedModule};
pub use rational::rational_candidates;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest `dim H` for which subspaces of `F_p^n` are enumerated.
    pub enum_bound: usize,
    /// Primes used for reduction of rational modules.
    pub primes: Vec<u64>,
    /// Entry bound for small-integer candidate vectors over ℚ.
    pub height: i64,
    /// Node budget for bounded isomorphism searches.
    pub iso_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            enum_bound: 4,
            primes: vec![3, 5, 7],
            height: 2,
            iso_budget: 200_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Stable,
    StrictlySemistable,
    Unstable,
    NoDestabilizerFound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Stable => "stable",
            Status::StrictlySemistable => "strictly_semistable",
            Status::Unstable => "unstable",
            Status::NoDestabilizerFound => "no_destabilizer_found",
        }
    }

    pub fn is_semistable(self) -> bool {
        matches!(self, Status::Stable | Status::StrictlySemistable)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Exhaustive,
    Heuristic(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub subspace: Subspace,
    pub lambda: OneParamSubgroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Option<Certificate>,
    pub provenance: Provenance,
    /// `μ(λ, q)` for the certificate's subgroup.
    pub mu: Option<Weight>,
}

/// `dim V + dim V^{⊥σ} − dim H`; positive means `V` destabilizes.
pub fn excess(q: &SigmaModule, v: &Subspace) -> Result<i64> {
    let perp = q.orthogonal(v)?;
    Ok(v.dim() as i64 + perp.dim() as i64 - q.dim_h() as i64)
}

/// All nonzero totally isotropic subspaces of a module over `F_p`, in search order.
pub fn enumerate_totally_isotropic(q: &SigmaModule, bound: usize) -> Result<Vec<Subspace>> {
    if !q.field().is_finite() {
        return Err(Error::NotFinite);
    }
    if q.dim_h() > bound {
        return Err(Error::BoundExceeded {
            what: format!("subspace enumeration in dimension {}", q.dim_h()),
            bound,
        });
    }
    let mut out = Vec::new();
    for v in all_subspaces(q.field(), q.dim_h())? {
        if !v.is_zero() && q.is_totally_isotropic(&v)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Outcome of a witness search, before certificates are attached.
#[derive(Clone, Debug)]
pub(crate) struct Analysis {
    pub status: Status,
    /// First destabilizing subspace when unstable, first equality witness when
    /// strictly semistable.
    pub witness: Option<Subspace>,
    /// Whether no equality witness of smaller dimension exists.
    pub witness_minimal: bool,
    pub provenance: Provenance,
}

/// Per-subspace excess over `F_p`, in search order.
pub(crate) fn excess_table(q: &SigmaModule, bound: usize) -> Result<Vec<(Subspace, i64)>> {
    enumerate_totally_isotropic(q, bound)?
        .into_iter()
        .map(|v| {
            let e = excess(q, &v)?;
            Ok((v, e))
        })
        .collect()
}

pub(crate) fn analyze_exhaustive(q: &SigmaModule, bound: usize) -> Result<Analysis> {
    let table = excess_table(q, bound)?;
    let provenance = Provenance::Exhaustive;
    if let Some((v, _)) = table.iter().find(|(_, e)| *e > 0) {
        return Ok(Analysis {
            status: Status::Unstable,
            witness: Some(v.clone()),
            witness_minimal: false,
            provenance,
        });
    }
    Ok(match table.into_iter().find(|(_, e)| *e == 0) {
        Some((v, _)) => Analysis {
            status: Status::StrictlySemistable,
            witness: Some(v),
            witness_minimal: true,
            provenance,
        },
        None => Analysis {
            status: Status::Stable,
            witness: None,
            witness_minimal: true,
            provenance,
        },
    })
}

pub(crate) fn analyze(q: &SigmaModule, config: &SearchConfig) -> Result<Analysis> {
    if q.field().is_finite() {
        analyze_exhaustive(q, config.enum_bound)
    } else {
        rational::analyze_rational(q, config)
    }
}

pub(crate) fn verdict_from(q: &SigmaModule, analysis: Analysis) -> Result<Verdict> {
    let (certificate, weight) = match &analysis.witness {
        Some(v) if matches!(analysis.status, Status::Unstable | Status::StrictlySemistable) => {
            let lambda = destabilizing_1ps(q, v)?;
            let m = mu(&lambda, q)?;
            let consistent = match analysis.status {
                Status::Unstable => m.is_negative(),
                _ => m == Weight::Finite(0),
            };
            if !consistent {
                return Err(Error::Internal(format!(
                    "certificate weight {m} does not match status {}",
                    analysis.status
                )));
            }
            (
                Some(Certificate {
                    subspace: v.clone(),
                    lambda,
                }),
                Some(m),
            )
        }
        _ => (None, None),
    };
    Ok(Verdict {
        status: analysis.status,
        certificate,
        provenance: analysis.provenance,
        mu: weight,
    })
}

/// Exhaustive verdict over `F_p`.
pub fn exhaustive_verdict(q: &SigmaModule, bound: usize) -> Result<Verdict> {
    check_valid(q)?;
    verdict_from(q, analyze_exhaustive(q, bound)?)
}

/// Verdict over ℚ: certified when possible, otherwise `no_destabilizer_found`.
pub fn rational_verdict(q: &SigmaModule, config: &SearchConfig) -> Result<Verdict> {
    check_valid(q)?;
    if q.field().is_finite() {
        return Err(Error::InvalidField(
            "reduction strategy expects a rational module".into(),
        ));
    }
    verdict_from(q, rational::analyze_rational(q, config)?)
}

/// Exhaustive over `F_p`, reduction-based over ℚ.
pub fn semistability_verdict(q: &SigmaModule, config: &SearchConfig) -> Result<Verdict> {
    check_valid(q)?;
    verdict_from(q, analyze(q, config)?)
}

pub(crate) fn check_valid(q: &SigmaModule) -> Result<()> {
    if q.validate() {
        Ok(())
    } else {
        Err(Error::SymmetryViolated)
    }
}
