//! l1 norm of coherence on the path-occupation basis and its pair-wise
//! decomposition into local and collective parts.
//!
//! Every pair of superposed occupation vectors contributes 2|c_a c_b| to the
//! total. A pair is *local* when the two occupations differ by a single moved
//! photon, so the superposition factors into a common Fock part times a
//! one-photon two-mode superposition; every other pair is *collective*. Only
//! local pairs drive interference fringes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{OccupationVector, PhotonState};

/// Threshold below which a summed coherence kind counts as absent.
const KIND_PRESENT_THRESHOLD: f64 = 1e-12;

/// Whether a pair-wise superposition is attributable to a single photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairKind {
    Local,
    Collective,
}

/// Coherence structure of a whole state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StateClass {
    LocalOnly,
    CollectiveOnly,
    Mixed,
    Incoherent,
}

/// One pair of superposed terms and its contribution 2|c_a c_b|.
///
/// Indices refer to positions in the state's canonical term list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseEntry {
    pub index_a: usize,
    pub index_b: usize,
    pub coherence: f64,
    pub kind: PairKind,
}

/// Total l1 coherence split over all pairs of nonzero terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub total: f64,
    pub local_sum: f64,
    pub collective_sum: f64,
    pub state_class: StateClass,
    pub entries: Vec<PairwiseEntry>,
}

impl CoherenceReport {
    pub fn local_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.kind == PairKind::Local)
            .count()
    }

    pub fn collective_count(&self) -> usize {
        self.entries.len() - self.local_count()
    }
}

/// l1 norm of coherence of a pure state on the occupation basis:
/// sum over ordered pairs i != j of |c_i||c_j|.
pub fn l1_coherence(state: &PhotonState) -> f64 {
    let sum_abs: f64 = state.terms().iter().map(|t| t.modulus()).sum();
    let sum_sq: f64 = state.terms().iter().map(|t| t.modulus().powi(2)).sum();
    (sum_abs * sum_abs - sum_sq).max(0.0)
}

/// Classify a pair of distinct occupation vectors as local or collective.
///
/// Local means `b` is `a` with exactly one photon moved between two modes.
pub fn classify_pair(a: &OccupationVector, b: &OccupationVector) -> Result<PairKind> {
    if a.modes() != b.modes() {
        return Err(Error::ModeCountMismatch {
            expected: a.modes(),
            got: b.modes(),
        });
    }
    if a.total() != b.total() {
        return Err(Error::PhotonTotalMismatch {
            expected: a.total(),
            got: b.total(),
        });
    }
    if a == b {
        return Err(Error::IdenticalOccupations);
    }
    let mut gained = 0usize;
    let mut lost = 0usize;
    for (&na, &nb) in a.counts().iter().zip(b.counts()) {
        match nb as i64 - na as i64 {
            0 => {}
            1 => gained += 1,
            -1 => lost += 1,
            _ => return Ok(PairKind::Collective),
        }
    }
    if gained == 1 && lost == 1 {
        Ok(PairKind::Local)
    } else {
        Ok(PairKind::Collective)
    }
}

/// Enumerate, classify, and sum the pair-wise coherences of a state.
///
/// Terms with exactly zero amplitude are skipped: they carry no weight and
/// would distort the pair counts. A state with a single populated term is
/// incoherent on this basis.
pub fn decompose(state: &PhotonState) -> CoherenceReport {
    let populated: Vec<(usize, &crate::fock::StateTerm)> = state
        .terms()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.modulus() > 0.0)
        .collect();

    let mut entries = Vec::with_capacity(populated.len() * (populated.len().saturating_sub(1)) / 2);
    let mut local_sum = 0.0;
    let mut collective_sum = 0.0;
    for (p, &(index_a, term_a)) in populated.iter().enumerate() {
        for &(index_b, term_b) in &populated[p + 1..] {
            let kind = classify_pair(term_a.occupation(), term_b.occupation())
                .expect("distinct occupations within one state");
            let coherence = 2.0 * term_a.modulus() * term_b.modulus();
            match kind {
                PairKind::Local => local_sum += coherence,
                PairKind::Collective => collective_sum += coherence,
            }
            entries.push(PairwiseEntry {
                index_a,
                index_b,
                coherence,
                kind,
            });
        }
    }

    let has_local = local_sum > KIND_PRESENT_THRESHOLD;
    let has_collective = collective_sum > KIND_PRESENT_THRESHOLD;
    let state_class = match (has_local, has_collective) {
        (true, true) => StateClass::Mixed,
        (true, false) => StateClass::LocalOnly,
        (false, true) => StateClass::CollectiveOnly,
        (false, false) => StateClass::Incoherent,
    };

    CoherenceReport {
        total: local_sum + collective_sum,
        local_sum,
        collective_sum,
        state_class,
        entries,
    }
}
