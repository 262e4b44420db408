//! Occupation-number states for a fixed number of photons distributed over
//! the paths of a multi-path interferometer.
//!
//! A state is a normalized superposition of occupation vectors |n_1 ... n_L>
//! with a fixed total photon number N. This module owns the state model, the
//! ladder-operator matrix elements between occupation vectors, and the
//! per-path phase-shift action. Everything downstream (coherence, intensity,
//! visibility) is computed from these pieces.

use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of an input state's squared norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Reduce an angle to [0, 2*pi).
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    // rounding in `r + TAU` can land exactly on TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Photon counts per path mode: the basis label |n_1 ... n_L>.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    counts: Vec<u32>,
}

impl OccupationVector {
    /// At least two modes, at least one photon in total.
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::TooFewModes(counts.len()));
        }
        if counts.iter().all(|&n| n == 0) {
            return Err(Error::ZeroPhotons);
        }
        Ok(Self { counts })
    }

    pub fn modes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, mode: usize) -> u32 {
        self.counts[mode]
    }
}

/// One superposition term: an occupation vector and its complex amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTerm {
    occupation: OccupationVector,
    amplitude: Complex64,
}

impl StateTerm {
    pub fn occupation(&self) -> &OccupationVector {
        &self.occupation
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    /// |c| of the amplitude.
    pub fn modulus(&self) -> f64 {
        self.amplitude.norm()
    }

    /// Argument of the amplitude in [0, 2*pi).
    pub fn argument(&self) -> f64 {
        wrap_angle(self.amplitude.arg())
    }
}

/// Normalized superposition of occupation vectors with fixed photon number.
///
/// Construction merges duplicate occupations (summing amplitudes), sorts the
/// terms into the canonical order (occupation vectors lexicographically
/// descending), and verifies the squared norm is within [`NORM_TOLERANCE`]
/// of 1 unless renormalization was requested. Amplitudes are stored in
/// rectangular form; moduli and arguments are derived accessors.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonState {
    modes: usize,
    photons: u32,
    terms: Vec<StateTerm>,
}

impl PhotonState {
    /// Build a state, requiring the amplitudes to already be normalized.
    pub fn new(terms: Vec<(OccupationVector, Complex64)>) -> Result<Self> {
        Self::build(terms, false)
    }

    /// Build a state, rescaling the amplitudes to unit norm.
    pub fn renormalized(terms: Vec<(OccupationVector, Complex64)>) -> Result<Self> {
        Self::build(terms, true)
    }

    fn build(mut terms: Vec<(OccupationVector, Complex64)>, renormalize: bool) -> Result<Self> {
        let (first_occ, _) = terms.first().ok_or(Error::EmptyState)?;
        let modes = first_occ.modes();
        let photons = first_occ.total();
        for (occ, _) in &terms {
            if occ.modes() != modes {
                return Err(Error::ModeCountMismatch {
                    expected: modes,
                    got: occ.modes(),
                });
            }
            if occ.total() != photons {
                return Err(Error::PhotonTotalMismatch {
                    expected: photons,
                    got: occ.total(),
                });
            }
        }

        // canonical order, then merge duplicates (merging precedes the norm check)
        terms.sort_by(|a, b| b.0.counts().cmp(a.0.counts()));
        let mut merged: Vec<StateTerm> = Vec::with_capacity(terms.len());
        for (occupation, amplitude) in terms {
            match merged.last_mut() {
                Some(last) if last.occupation == occupation => last.amplitude += amplitude,
                _ => merged.push(StateTerm {
                    occupation,
                    amplitude,
                }),
            }
        }

        let norm_sq: f64 = merged.iter().map(|t| t.amplitude.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(Error::NotNormalized { norm_sq });
        }
        if norm_sq == 0.0 {
            return Err(Error::EmptyState);
        }
        if renormalize {
            let scale = 1.0 / norm_sq.sqrt();
            for t in &mut merged {
                t.amplitude *= scale;
            }
        } else if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }

        Ok(Self {
            modes,
            photons,
            terms: merged,
        })
    }

    /// Construction path for operations that provably preserve the invariants.
    pub(crate) fn from_invariant_terms(modes: usize, photons: u32, terms: Vec<StateTerm>) -> Self {
        Self {
            modes,
            photons,
            terms,
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> u32 {
        self.photons
    }

    pub fn terms(&self) -> &[StateTerm] {
        &self.terms
    }

    pub fn norm_sq(&self) -> f64 {
        self.terms.iter().map(|t| t.amplitude.norm_sqr()).sum()
    }

    /// Serialize into the state-document schema.
    pub fn to_document_json(&self) -> serde_json::Value {
        let doc = StateDocument {
            modes: self.modes,
            photons: self.photons,
            renormalize: false,
            terms: self
                .terms
                .iter()
                .map(|t| TermDocument {
                    occ: t.occupation.counts().to_vec(),
                    amp: [t.amplitude.re, t.amplitude.im],
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("state document serializes")
    }
}

/// One phase shift per path, stored reduced to [0, 2*pi).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PhaseConfig {
    phases: Vec<f64>,
}

impl PhaseConfig {
    pub fn new(phases: Vec<f64>) -> Self {
        Self {
            phases: phases.into_iter().map(wrap_angle).collect(),
        }
    }

    pub fn zeros(modes: usize) -> Self {
        Self {
            phases: vec![0.0; modes],
        }
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Electric-field dimension constant; intensities scale with its square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldScale {
    epsilon0: f64,
}

impl FieldScale {
    pub fn new(epsilon0: f64) -> Result<Self> {
        if !(epsilon0.is_finite() && epsilon0 > 0.0) {
            return Err(Error::NonPositiveFieldScale(epsilon0));
        }
        Ok(Self { epsilon0 })
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    /// |epsilon0|^2, the unit in which intensities are reported.
    pub fn intensity_unit(&self) -> f64 {
        self.epsilon0 * self.epsilon0
    }

    /// Convert an intensity reported in units of |epsilon0|^2 to field units.
    pub fn scale_intensity(&self, intensity_in_units: f64) -> f64 {
        intensity_in_units * self.intensity_unit()
    }
}

impl Default for FieldScale {
    fn default() -> Self {
        Self { epsilon0: 1.0 }
    }
}

#[derive(Serialize, Deserialize)]
struct StateDocument {
    modes: usize,
    photons: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    renormalize: bool,
    terms: Vec<TermDocument>,
}

#[derive(Serialize, Deserialize)]
struct TermDocument {
    occ: Vec<u32>,
    amp: [f64; 2],
}

/// Parse a UTF-8 state document (JSON) into a [`PhotonState`].
///
/// Duplicate occupations are merged before the normalization check; amplitudes
/// are rescaled to unit norm only when the document sets `renormalize`.
pub fn parse_state(text: &str) -> Result<PhotonState> {
    let doc: StateDocument =
        serde_json::from_str(text).map_err(|e| Error::StateFormat(e.to_string()))?;
    if doc.modes < 2 {
        return Err(Error::TooFewModes(doc.modes));
    }
    if doc.photons == 0 {
        return Err(Error::ZeroPhotons);
    }
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in doc.terms {
        if t.occ.len() != doc.modes {
            return Err(Error::ModeCountMismatch {
                expected: doc.modes,
                got: t.occ.len(),
            });
        }
        let total: u32 = t.occ.iter().sum();
        if total != doc.photons {
            return Err(Error::PhotonTotalMismatch {
                expected: doc.photons,
                got: total,
            });
        }
        terms.push((
            OccupationVector::new(t.occ)?,
            Complex64::new(t.amp[0], t.amp[1]),
        ));
    }
    if doc.renormalize {
        PhotonState::renormalized(terms)
    } else {
        PhotonState::new(terms)
    }
}

/// Matrix element <target| a_i^dag a_j |source| for distinct modes i, j.
///
/// Nonzero exactly when `target` equals `source` with one photon moved from
/// mode `j` to mode `i`, in which case it is sqrt((source_i + 1) * source_j).
pub fn hopping_element(
    target: &OccupationVector,
    source: &OccupationVector,
    i: usize,
    j: usize,
) -> Result<f64> {
    if i == j {
        return Err(Error::EqualModeIndices);
    }
    let modes = source.modes();
    if target.modes() != modes {
        return Err(Error::ModeCountMismatch {
            expected: modes,
            got: target.modes(),
        });
    }
    for index in [i, j] {
        if index >= modes {
            return Err(Error::ModeIndexOutOfRange { index, modes });
        }
    }
    if source.count(j) == 0 {
        return Ok(0.0);
    }
    for k in 0..modes {
        let shift = (k == i) as i64 - (k == j) as i64;
        if target.count(k) as i64 != source.count(k) as i64 + shift {
            return Ok(0.0);
        }
    }
    Ok((((source.count(i) + 1) * source.count(j)) as f64).sqrt())
}

/// The L x L matrix of one-body expectation values <a_i^dag a_j>.
///
/// Off-diagonal entries accumulate hopping elements over all pairs of terms;
/// diagonal entries are the mean photon numbers per mode. The result is
/// Hermitian with trace equal to the photon number.
pub fn one_body_matrix(state: &PhotonState) -> Array2<Complex64> {
    let l = state.modes();
    let mut m = Array2::<Complex64>::zeros((l, l));
    for t in state.terms() {
        let w = t.amplitude().norm_sqr();
        for k in 0..l {
            m[(k, k)] += Complex64::new(w * t.occupation().count(k) as f64, 0.0);
        }
    }
    for (a, ta) in state.terms().iter().enumerate() {
        for (b, tb) in state.terms().iter().enumerate() {
            if a == b {
                continue;
            }
            for i in 0..l {
                for j in 0..l {
                    if i == j {
                        continue;
                    }
                    let h = hopping_element(ta.occupation(), tb.occupation(), i, j)
                        .expect("distinct in-range mode indices");
                    if h != 0.0 {
                        m[(i, j)] += ta.amplitude().conj() * tb.amplitude() * h;
                    }
                }
            }
        }
    }
    m
}

/// Apply per-path phase shifts: each amplitude gains exp(i * sum_j n_j * alpha_j).
///
/// Occupations are unchanged and the norm is preserved.
pub fn apply_phase_shift(state: &PhotonState, phases: &PhaseConfig) -> Result<PhotonState> {
    if phases.len() != state.modes() {
        return Err(Error::PhaseLengthMismatch {
            expected: state.modes(),
            got: phases.len(),
        });
    }
    let terms = state
        .terms()
        .iter()
        .map(|t| {
            let theta: f64 = t
                .occupation()
                .counts()
                .iter()
                .zip(phases.phases())
                .map(|(&n, &alpha)| n as f64 * alpha)
                .sum();
            StateTerm {
                occupation: t.occupation().clone(),
                amplitude: t.amplitude() * Complex64::from_polar(1.0, theta),
            }
        })
        .collect();
    Ok(PhotonState::from_invariant_terms(
        state.modes(),
        state.photons(),
        terms,
    ))
}

/// Number of occupation vectors for `photons` photons over `modes` modes,
/// saturating at `u64::MAX` for inputs far beyond desk scale.
pub fn basis_size(modes: usize, photons: u32) -> usize {
    binomial(photons as u64 + modes as u64 - 1, modes as u64 - 1) as usize
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for step in 0..k {
        acc = acc.saturating_mul((n - step) as u128) / (step + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All occupation vectors of `photons` photons over `modes` modes, in the
/// canonical lexicographically descending order.
pub fn enumerate_basis(modes: usize, photons: u32) -> Result<Vec<OccupationVector>> {
    if modes < 2 {
        return Err(Error::TooFewModes(modes));
    }
    if photons == 0 {
        return Err(Error::ZeroPhotons);
    }
    let mut out = Vec::with_capacity(basis_size(modes, photons).min(1 << 20));
    let mut prefix = Vec::with_capacity(modes);
    fill_descending(modes, photons, &mut prefix, &mut out);
    Ok(out)
}

fn fill_descending(
    modes: usize,
    remaining: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<OccupationVector>,
) {
    if prefix.len() == modes - 1 {
        prefix.push(remaining);
        out.push(OccupationVector {
            counts: prefix.clone(),
        });
        prefix.pop();
        return;
    }
    for n in (0..=remaining).rev() {
        prefix.push(n);
        fill_descending(modes, remaining - n, prefix, out);
        prefix.pop();
    }
}
