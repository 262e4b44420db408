//! Brute-force reference implementations used as ground truth by tests.
//!
//! Intensities here come from dense ladder-operator matrices over the full
//! Fock basis and literal expectation values, with no arithmetic shared with
//! the production path in `interference`. Slow on purpose; capped at desk
//! scale.

use std::collections::HashMap;
use std::f64::consts::TAU;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{basis_size, OccupationVector, PhaseConfig, PhotonState};

/// Largest basis the dense routines will materialize.
pub const DEFAULT_BASIS_CAP: usize = 5000;

/// Largest number of grid cells `grid_search_min` will visit.
pub const GRID_CELL_BUDGET: u64 = 1 << 28;

/// Exhaustive enumeration of the occupation vectors for (modes, photons),
/// in canonical lexicographically descending order.
#[derive(Debug, Clone)]
pub struct FockBasis {
    modes: usize,
    photons: u32,
    vectors: Vec<OccupationVector>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn new(modes: usize, photons: u32) -> Result<Self> {
        Self::with_cap(modes, photons, DEFAULT_BASIS_CAP)
    }

    pub fn with_cap(modes: usize, photons: u32, cap: usize) -> Result<Self> {
        if modes < 2 {
            return Err(Error::TooFewModes(modes));
        }
        if photons == 0 {
            return Err(Error::ZeroPhotons);
        }
        let dim = basis_size(modes, photons);
        if dim > cap {
            return Err(Error::BasisTooLarge { dim, cap });
        }
        // grow from the last mode backwards, then sort into canonical order
        let mut counts = Vec::with_capacity(dim);
        let mut suffix = vec![0u32; modes];
        grow(&mut suffix, modes, photons, &mut counts);
        counts.sort_by(|a, b| b.cmp(a));
        let index = counts
            .iter()
            .enumerate()
            .map(|(k, c)| (c.clone(), k))
            .collect();
        let vectors = counts
            .into_iter()
            .map(|c| OccupationVector::new(c).expect("enumerated occupations are valid"))
            .collect();
        Ok(Self {
            modes,
            photons,
            vectors,
            index,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> u32 {
        self.photons
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[OccupationVector] {
        &self.vectors
    }

    pub fn position(&self, occupation: &OccupationVector) -> Option<usize> {
        self.index.get(occupation.counts()).copied()
    }

    fn position_of_counts(&self, counts: &[u32]) -> Option<usize> {
        self.index.get(counts).copied()
    }
}

fn grow(buffer: &mut [u32], mode: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if mode == 1 {
        buffer[0] = remaining;
        out.push(buffer.to_vec());
        return;
    }
    for n in 0..=remaining {
        buffer[mode - 1] = n;
        grow(buffer, mode - 1, remaining - n, out);
    }
    buffer[mode - 1] = 0;
}

/// Dense matrix of the operator a_i^dag a_j over a basis (row target,
/// column source). For i = j this is the number operator of mode i.
pub fn ladder_matrix(basis: &FockBasis, i: usize, j: usize) -> Array2<Complex64> {
    let dim = basis.len();
    let mut matrix = Array2::<Complex64>::zeros((dim, dim));
    for (col, source) in basis.vectors().iter().enumerate() {
        let counts = source.counts();
        if i == j {
            matrix[(col, col)] = Complex64::new(counts[i] as f64, 0.0);
            continue;
        }
        if counts[j] == 0 {
            continue;
        }
        let mut moved = counts.to_vec();
        moved[j] -= 1;
        moved[i] += 1;
        let row = basis
            .position_of_counts(&moved)
            .expect("moved occupation stays in the basis");
        let weight = ((counts[j] as f64) * (moved[i] as f64)).sqrt();
        matrix[(row, col)] = Complex64::new(weight, 0.0);
    }
    matrix
}

fn dense_vector(basis: &FockBasis, state: &PhotonState) -> Array1<Complex64> {
    let mut psi = Array1::<Complex64>::zeros(basis.len());
    for term in state.terms() {
        let k = basis
            .position(term.occupation())
            .expect("state occupations live in the full basis");
        psi[k] = term.amplitude();
    }
    psi
}

fn dense_phase_applied(
    basis: &FockBasis,
    psi: &Array1<Complex64>,
    phases: &[f64],
) -> Array1<Complex64> {
    let mut out = psi.clone();
    for (k, occupation) in basis.vectors().iter().enumerate() {
        let theta: f64 = occupation
            .counts()
            .iter()
            .zip(phases)
            .map(|(&n, &alpha)| n as f64 * alpha)
            .sum();
        out[k] *= Complex64::from_polar(1.0, theta);
    }
    out
}

fn summed_ladder_operator(basis: &FockBasis) -> Array2<Complex64> {
    let modes = basis.modes();
    let mut op = Array2::<Complex64>::zeros((basis.len(), basis.len()));
    for i in 0..modes {
        for j in 0..modes {
            op += &ladder_matrix(basis, i, j);
        }
    }
    op
}

/// Interference intensity evaluated literally: the expectation value of
/// sum_{i,j} a_i^dag a_j in the phase-shifted state, via dense
/// matrix-vector products over the full Fock basis.
pub fn dense_intensity(state: &PhotonState, phases: &PhaseConfig) -> Result<f64> {
    if phases.len() != state.modes() {
        return Err(Error::PhaseLengthMismatch {
            expected: state.modes(),
            got: phases.len(),
        });
    }
    let basis = FockBasis::new(state.modes(), state.photons())?;
    let psi = dense_vector(&basis, state);
    let shifted = dense_phase_applied(&basis, &psi, phases.phases());
    let op = summed_ladder_operator(&basis);
    let applied = op.dot(&shifted);
    let value: Complex64 = shifted
        .iter()
        .zip(applied.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(value.re)
}

/// Exhaustive minimum of the dense intensity over a uniform phase grid with
/// the last mode gauge-fixed to zero. Ties within 1e-12 keep the
/// lexicographically smallest phase vector.
pub fn grid_search_min(state: &PhotonState, resolution: usize) -> Result<(PhaseConfig, f64)> {
    if resolution < 16 {
        return Err(Error::ResolutionTooSmall(resolution));
    }
    let dims = state.modes() - 1;
    let cells = (resolution as u64).checked_pow(dims as u32);
    match cells {
        Some(c) if c <= GRID_CELL_BUDGET => {}
        _ => {
            return Err(Error::GridTooLarge { resolution, dims });
        }
    }

    let basis = FockBasis::new(state.modes(), state.photons())?;
    let psi = dense_vector(&basis, state);
    let op = summed_ladder_operator(&basis);
    let dim = basis.len();

    // exp(i n . alpha) reduces to a table lookup: with alpha_m = 2 pi k_m / R
    // the accumulated phase index is sum_m n_m k_m mod R
    let table: Vec<Complex64> = (0..resolution)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / resolution as f64))
        .collect();
    let occupations: Vec<&[u32]> = basis.vectors().iter().map(|v| v.counts()).collect();

    let mut indices = vec![0usize; dims];
    let mut best_indices = vec![0usize; dims];
    let mut best_value = f64::INFINITY;
    let mut shifted = Array1::<Complex64>::zeros(dim);
    loop {
        for (k, occupation) in occupations.iter().enumerate() {
            let mut phase_index = 0usize;
            for (d, &ix) in indices.iter().enumerate() {
                phase_index = (phase_index + occupation[d] as usize * ix) % resolution;
            }
            shifted[k] = psi[k] * table[phase_index];
        }
        let applied = op.dot(&shifted);
        let value: Complex64 = shifted
            .iter()
            .zip(applied.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        if value.re < best_value - 1e-12 {
            best_value = value.re;
            best_indices.copy_from_slice(&indices);
        }

        let mut pos = dims;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < resolution {
                break;
            }
            indices[pos] = 0;
        }
        if indices.iter().all(|&ix| ix == 0) {
            break;
        }
    }

    let mut phases = vec![0.0; state.modes()];
    for (d, &ix) in best_indices.iter().enumerate() {
        phases[d] = TAU * ix as f64 / resolution as f64;
    }
    Ok((PhaseConfig::new(phases), best_value))
}
