//! Nonsingular M-matrix certification through five equivalent
//! characterizations, combined into a consensus report.
//!
//! For Z-matrices the following are equivalent, and each is checked by an
//! independent code path:
//!
//! - `E17`: every leading principal minor is positive;
//! - `D16`: every real eigenvalue is positive;
//! - `N38`: the matrix is nonsingular with an entrywise nonnegative inverse;
//! - `POS_STABLE`: every eigenvalue has positive real part;
//! - `RHO_SPLIT`: writing `M = sI - N` with `s` the largest diagonal entry,
//!   `rho(N) < s`.
//!
//! Exact inputs additionally get `E17_EXACT`, decided without tolerance.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::{eigenvalues, spectral_radius, AnyMatrix, Matrix, Rational, Scalar, Status, Tolerance, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    E17,
    #[serde(rename = "E17_EXACT")]
    E17Exact,
    D16,
    N38,
    #[serde(rename = "POS_STABLE")]
    PosStable,
    #[serde(rename = "RHO_SPLIT")]
    RhoSplit,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Self::E17 => "E17",
            Self::E17Exact => "E17_EXACT",
            Self::D16 => "D16",
            Self::N38 => "N38",
            Self::PosStable => "POS_STABLE",
            Self::RhoSplit => "RHO_SPLIT",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Consensus {
    Yes,
    No,
    Marginal,
    Disagree,
    /// The input is not a Z-matrix, so the conditions are not equivalent.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConditionOutcome {
    Decided(Verdict),
    Failed { error: String },
}

impl ConditionOutcome {
    pub fn verdict(&self) -> Option<&Verdict> {
        match self {
            Self::Decided(v) => Some(v),
            Self::Failed { .. } => None,
        }
    }
}

impl From<Result<Verdict>> for ConditionOutcome {
    fn from(r: Result<Verdict>) -> Self {
        match r {
            Ok(v) => Self::Decided(v),
            Err(e) => Self::Failed { error: e.to_string() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub input_dim: usize,
    pub is_z: bool,
    pub exact: bool,
    pub verdicts: BTreeMap<Condition, ConditionOutcome>,
    pub consensus: Consensus,
    pub margins: BTreeMap<Condition, Option<f64>>,
}

impl CertificationReport {
    pub fn verdict(&self, c: Condition) -> Option<&Verdict> {
        self.verdicts.get(&c).and_then(ConditionOutcome::verdict)
    }

    pub fn is_yes(&self) -> bool {
        self.consensus == Consensus::Yes
    }

    /// Smallest absolute margin over the decided conditions.
    pub fn min_abs_margin(&self) -> f64 {
        self.verdicts.values().filter_map(|o| o.verdict()).map(|v| v.margin.abs()).fold(f64::INFINITY, f64::min)
    }
}

/// Leading principal minors. Exact backing decides strictly; float backing
/// reports `MARGINAL` when the smallest minor is within `tol` of zero.
pub fn check_e17(m: &AnyMatrix, tol: Tolerance) -> Verdict {
    match m {
        AnyMatrix::Exact(x) => check_e17_exact(x),
        AnyMatrix::Float(x) => check_e17_float(x, tol),
    }
}

pub fn check_e17_exact(m: &Matrix<Rational>) -> Verdict {
    let minors = m.leading_principal_minors();
    let pass = minors.iter().all(Signed::is_positive);
    let min = minors.iter().map(Scalar::to_f64).fold(f64::INFINITY, f64::min);
    Verdict::sharp(pass, min)
}

pub fn check_e17_float(m: &Matrix<f64>, tol: Tolerance) -> Verdict {
    let min = m.leading_principal_minors().into_iter().fold(f64::INFINITY, f64::min);
    Verdict::banded(min, tol)
}

/// Real eigenvalues positive. An eigenvalue counts as real when its
/// imaginary part is below `tol`; with no real eigenvalue the condition holds
/// vacuously with infinite margin.
pub fn check_d16(m: &Matrix<f64>, tol: Tolerance) -> Result<Verdict> {
    let min = eigenvalues(m)?
        .into_iter()
        .filter(|z| z.im.abs() < tol.value())
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    Ok(Verdict::banded(min, tol))
}

/// Nonsingular with a nonnegative inverse. The margin is the smallest entry
/// of the inverse. Singular input gives margin `-|det|`: `NO` in exact
/// backing, banded by `tol` in float backing.
pub fn check_n38(m: &AnyMatrix, tol: Tolerance) -> Verdict {
    match m {
        AnyMatrix::Exact(x) => match x.inverse() {
            None => Verdict::sharp(false, -x.det().to_f64().abs()),
            Some(inv) => {
                let pass = inv.as_slice().iter().all(|e| !e.is_negative());
                let min = inv.as_slice().iter().map(Scalar::to_f64).fold(f64::INFINITY, f64::min);
                Verdict::sharp(pass, min)
            }
        },
        AnyMatrix::Float(x) => match x.inverse() {
            None => Verdict::banded(-x.det().abs(), tol),
            Some(inv) => {
                let min = inv.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
                // rounding in a large inverse scales with its size
                let slack = tol.value() * inv.max_abs().max(1.0);
                Verdict::sharp(min >= -slack, min)
            }
        },
    }
}

/// Every eigenvalue has real part above `tol`.
pub fn check_positive_stable(m: &Matrix<f64>, tol: Tolerance) -> Result<Verdict> {
    let min = eigenvalues(m)?.into_iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    Ok(Verdict::banded(min, tol))
}

/// Splits `M = sI - N` with `s = max diag(M)` and compares `rho(N)` to `s`.
pub fn check_rho_split(m: &Matrix<f64>, tol: Tolerance) -> Result<Verdict> {
    if !m.is_z_matrix() {
        return Err(domain("rho-split characterization needs a Z-matrix"));
    }
    let s = m.max_diagonal();
    if s <= 0.0 {
        return Ok(Verdict::sharp(false, s));
    }
    let n = Matrix::from_fn(m.dim(), |i, j| if i == j { s - m[(i, j)] } else { (-m[(i, j)]).max(0.0) });
    let rho = spectral_radius(&n)?;
    Ok(Verdict::banded(s - rho, tol))
}

/// Runs the Z-test and every characterization, then folds the decided
/// verdicts into a consensus. Per-condition failures are recorded in the
/// report instead of aborting it.
pub fn certify(m: &AnyMatrix, tol: Tolerance) -> CertificationReport {
    let float = m.to_f64();
    let is_z = m.is_z_matrix();
    let mut verdicts = BTreeMap::new();
    verdicts.insert(Condition::E17, ConditionOutcome::Decided(check_e17_float(&float, tol)));
    if let AnyMatrix::Exact(x) = m {
        verdicts.insert(Condition::E17Exact, ConditionOutcome::Decided(check_e17_exact(x)));
    }
    verdicts.insert(Condition::D16, check_d16(&float, tol).into());
    verdicts.insert(Condition::N38, ConditionOutcome::Decided(check_n38(m, tol)));
    verdicts.insert(Condition::PosStable, check_positive_stable(&float, tol).into());
    verdicts.insert(Condition::RhoSplit, check_rho_split(&float, tol).into());

    let consensus = if is_z { fold_consensus(verdicts.values().filter_map(|o| o.verdict())) } else { Consensus::NotApplicable };
    let margins = verdicts.iter().map(|(c, o)| (*c, o.verdict().map(|v| v.margin).filter(|x| x.is_finite()))).collect();
    CertificationReport { input_dim: m.dim(), is_z, exact: m.is_exact(), verdicts, consensus, margins }
}

fn fold_consensus<'a>(verdicts: impl Iterator<Item = &'a Verdict>) -> Consensus {
    let (mut yes, mut no, mut marginal) = (0, 0, 0);
    for v in verdicts {
        match v.status {
            Status::Yes => yes += 1,
            Status::No => no += 1,
            Status::Marginal => marginal += 1,
        }
    }
    match (yes, no, marginal) {
        (_, _, m) if m > 0 && (yes == 0 || no == 0) => Consensus::Marginal,
        (y, 0, 0) if y > 0 => Consensus::Yes,
        (0, n, 0) if n > 0 => Consensus::No,
        (0, 0, 0) => Consensus::Marginal,
        _ => Consensus::Disagree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::DEFAULT
    }

    #[test]
    fn e17_examples() {
        let v = check_e17(&f(&[&[2.0, -1.0], &[-1.0, 2.0]]).into(), tol());
        assert_eq!((v.status, v.margin), (Status::Yes, 2.0));
        let singular = f(&[&[1.0, -1.0], &[-1.0, 1.0]]);
        assert_eq!(check_e17(&singular.to_exact_from_input().unwrap().into(), tol()).status, Status::No);
        assert_eq!(check_e17(&singular.into(), tol()).status, Status::Marginal);
        assert_eq!(check_e17(&f(&[&[-1.0]]).into(), tol()).status, Status::No);
    }

    #[test]
    fn d16_examples() {
        assert!(check_d16(&f(&[&[2.0, -1.0], &[-1.0, 2.0]]), tol()).unwrap().is_yes());
        assert!(check_d16(&Matrix::identity(3), tol()).unwrap().is_yes());
        assert_eq!(check_d16(&f(&[&[0.0, -1.0], &[-1.0, 0.0]]), tol()).unwrap().status, Status::No);
        // no real eigenvalues: vacuous
        let v = check_d16(&f(&[&[0.0, 1.0], &[-1.0, 0.0]]), tol()).unwrap();
        assert!(v.is_yes() && v.margin.is_infinite());
    }

    #[test]
    fn n38_examples() {
        let v = check_n38(&f(&[&[2.0, -1.0], &[-1.0, 2.0]]).into(), tol());
        assert!(v.is_yes());
        assert!((v.margin - 1.0 / 3.0).abs() < 1e-15);
        assert!(check_n38(&Matrix::<f64>::identity(2).into(), tol()).is_yes());
        let v = check_n38(&f(&[&[1.0, 2.0], &[0.0, 1.0]]).into(), tol());
        assert_eq!((v.status, v.margin), (Status::No, -2.0));
        let exact = f(&[&[1.0, -1.0], &[-1.0, 1.0]]).to_exact_from_input().unwrap();
        assert_eq!(check_n38(&exact.into(), tol()).status, Status::No);
    }

    #[test]
    fn positive_stable_examples() {
        let v = check_positive_stable(&f(&[&[2.0, -1.0], &[-1.0, 2.0]]), tol()).unwrap();
        assert!(v.is_yes() && (v.margin - 1.0).abs() < 1e-12);
        assert_ne!(check_positive_stable(&f(&[&[0.0, 1.0], &[-1.0, 0.0]]), tol()).unwrap().status, Status::Yes);
        let v = check_positive_stable(&Matrix::identity(5), tol()).unwrap();
        assert!(v.is_yes() && (v.margin - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rho_split_examples() {
        let v = check_rho_split(&f(&[&[2.0, -1.0], &[-1.0, 2.0]]), tol()).unwrap();
        assert!(v.is_yes() && (v.margin - 1.0).abs() < 1e-12);
        let v = check_rho_split(&f(&[&[1.0, -1.0], &[-1.0, 1.0]]), tol()).unwrap();
        assert_ne!(v.status, Status::Yes);
        let v = check_rho_split(&Matrix::identity(2), tol()).unwrap();
        assert_eq!((v.status, v.margin), (Status::Yes, 1.0));
        assert!(check_rho_split(&f(&[&[1.0, 0.5], &[0.5, 1.0]]), tol()).is_err());
        assert_eq!(check_rho_split(&f(&[&[-1.0, 0.0], &[0.0, -2.0]]), tol()).unwrap().status, Status::No);
    }

    #[test]
    fn certify_examples() {
        let r = certify(&f(&[&[2.0, -1.0], &[-1.0, 2.0]]).into(), tol());
        assert_eq!(r.consensus, Consensus::Yes);
        assert_eq!(r.verdicts.len(), 5);
        assert!(r.verdicts.values().all(|o| o.verdict().unwrap().is_yes()));

        let r = certify(&f(&[&[1.0, -2.0], &[-2.0, 1.0]]).into(), tol());
        assert_eq!(r.consensus, Consensus::No);

        let r = certify(&f(&[&[1.0, 0.5], &[0.5, 1.0]]).into(), tol());
        assert!(!r.is_z);
        assert_eq!(r.consensus, Consensus::NotApplicable);
        assert!(r.verdict(Condition::E17).is_some());
        assert!(matches!(r.verdicts[&Condition::RhoSplit], ConditionOutcome::Failed { .. }));
    }

    #[test]
    fn exact_input_adds_exact_e17() {
        let exact = f(&[&[2.0, -1.0], &[-1.0, 2.0]]).to_exact_from_input().unwrap();
        let r = certify(&exact.into(), tol());
        assert_eq!(r.verdicts.len(), 6);
        assert!(r.verdict(Condition::E17Exact).unwrap().is_yes());
        assert!(r.is_yes());
    }

    #[test]
    fn singular_boundary_is_marginal() {
        let r = certify(&f(&[&[1.0, -1.0], &[-1.0, 1.0]]).into(), tol());
        assert_eq!(r.consensus, Consensus::Marginal);
    }

    #[test]
    fn consensus_folding() {
        let y = Verdict::sharp(true, 1.0);
        let n = Verdict::sharp(false, -1.0);
        let m = Verdict { status: Status::Marginal, margin: 0.0 };
        assert_eq!(fold_consensus([y, y].iter()), Consensus::Yes);
        assert_eq!(fold_consensus([n, n].iter()), Consensus::No);
        assert_eq!(fold_consensus([y, m].iter()), Consensus::Marginal);
        assert_eq!(fold_consensus([n, m].iter()), Consensus::Marginal);
        assert_eq!(fold_consensus([y, n].iter()), Consensus::Disagree);
        assert_eq!(fold_consensus([y, n, m].iter()), Consensus::Disagree);
    }

    #[test]
    fn report_serializes_with_condition_names() {
        let r = certify(&f(&[&[2.0, -1.0], &[-1.0, 2.0]]).into(), tol());
        let text = serde_json::to_string(&r).unwrap();
        for name in ["E17", "D16", "N38", "POS_STABLE", "RHO_SPLIT"] {
            assert!(text.contains(&format!("\"{name}\"")), "{name} missing from {text}");
        }
        let back: CertificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
