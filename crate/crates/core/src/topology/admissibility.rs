//! Necessary conditions on a pair of Chern classes for a `T²`-bundle over an
//! AC Calabi–Yau 3-fold to carry the structures studied here.
//!
//! The validator never errors: every failure becomes a report entry.

use std::fmt;

use num::Zero;

use super::lattice::{integer_rank, ChernCandidate, IntersectionLattice, KahlerVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The condition is empty, e.g. the Massey obstruction when `H⁵(B) = 0`.
    Vacuous,
    /// The condition cannot be decided from the supplied data.
    Undetermined,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Vacuous => "VACUOUS",
            CheckStatus::Undetermined => "UNDETERMINED",
        })
    }
}

/// Cohomological data of the link `Σ` and the base `B` not visible in the
/// intersection lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkData {
    pub b2_link: i64,
    pub h5_base: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityEntry {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub entries: Vec<AdmissibilityEntry>,
}

impl AdmissibilityReport {
    /// No entry failed.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != CheckStatus::Fail)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.status)
    }
}

fn entry(name: impl Into<String>, ok: bool, detail: String) -> AdmissibilityEntry {
    AdmissibilityEntry { name: name.into(), status: if ok { CheckStatus::Pass } else { CheckStatus::Fail }, detail }
}

pub fn admissibility_report(
    l: &IntersectionLattice,
    k: &KahlerVector,
    candidates: &[ChernCandidate],
    link: &LinkData,
) -> AdmissibilityReport {
    let mut entries = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let name = format!("orthogonality[{i}]");
        entries.push(match l.pairing(&c.a, k.as_slice()) {
            Ok(v) => entry(name, v.is_zero(), format!("{:?} . Q . k = {v}", c.a)),
            Err(e) => entry(name, false, e.to_string()),
        });
    }
    let vectors: Vec<Vec<i64>> = candidates.iter().map(|c| c.a.clone()).collect();
    entries.push(match integer_rank(&vectors) {
        Ok(r) => entry("independence", r >= 2, format!("{} candidates span rank {r}, need 2", candidates.len())),
        Err(e) => entry("independence", false, e.to_string()),
    });
    let m = l.rank();
    entries.push(entry("h2_base", m >= 2, format!("dim H^2(B) = {m}, need >= 2")));
    entries.push(entry("h2_link", link.b2_link >= 1, format!("dim H^2(link) = {}, need >= 1", link.b2_link)));
    entries.push(if link.h5_base == 0 {
        AdmissibilityEntry { name: "massey".into(), status: CheckStatus::Vacuous, detail: "H^5(B) = 0".into() }
    } else {
        AdmissibilityEntry {
            name: "massey".into(),
            status: CheckStatus::Undetermined,
            detail: format!("dim H^5(B) = {}; triple products need cochain data", link.h5_base),
        }
    });
    AdmissibilityReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn setup() -> (IntersectionLattice, KahlerVector) {
        let l = IntersectionLattice::diagonal(&[q(1, 1), q(-1, 1), q(-1, 1), q(-1, 1)], Vec::new()).unwrap();
        (l, KahlerVector::new(vec![3, 1, 1, 1]).unwrap())
    }

    fn cand(a: &[i64]) -> ChernCandidate {
        ChernCandidate::new(a.to_vec()).unwrap()
    }

    #[test]
    fn valid_pair_passes() {
        let (l, k) = setup();
        let rep = admissibility_report(&l, &k, &[cand(&[1, 1, 1, 1]), cand(&[0, 1, -1, 0])], &LinkData { b2_link: 3, h5_base: 0 });
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.status("massey"), Some(CheckStatus::Vacuous));
    }

    #[test]
    fn single_candidate_is_not_independent() {
        let (l, k) = setup();
        let rep = admissibility_report(&l, &k, &[cand(&[1, 1, 1, 1])], &LinkData { b2_link: 3, h5_base: 0 });
        assert_eq!(rep.status("independence"), Some(CheckStatus::Fail));
        assert!(!rep.passed());
    }

    #[test]
    fn link_without_h2_fails() {
        let (l, k) = setup();
        let rep = admissibility_report(&l, &k, &[cand(&[1, 1, 1, 1]), cand(&[0, 1, -1, 0])], &LinkData { b2_link: 0, h5_base: 1 });
        assert_eq!(rep.status("h2_link"), Some(CheckStatus::Fail));
        assert_eq!(rep.status("massey"), Some(CheckStatus::Undetermined));
    }

    #[test]
    fn non_orthogonal_and_malformed_candidates_fail() {
        let (l, k) = setup();
        let rep = admissibility_report(&l, &k, &[cand(&[1, 0, 0, 0]), cand(&[1, 1])], &LinkData { b2_link: 3, h5_base: 0 });
        assert_eq!(rep.status("orthogonality[0]"), Some(CheckStatus::Fail));
        assert_eq!(rep.status("orthogonality[1]"), Some(CheckStatus::Fail));
        assert_eq!(rep.status("independence"), Some(CheckStatus::Fail));
    }
}
