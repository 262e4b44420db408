//! Seeded random inputs for fuzz checks and the verification table.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::fock::{enumerate_basis, PhaseConfig, PhotonState};

/// A random normalized state over the full (modes, photons) basis.
pub fn random_state<R: Rng>(modes: usize, photons: u32, rng: &mut R) -> PhotonState {
    let basis = enumerate_basis(modes, photons).expect("valid desk-scale dimensions");
    loop {
        let terms: Vec<_> = basis
            .iter()
            .map(|occ| {
                (
                    occ.clone(),
                    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0),
                )
            })
            .collect();
        let norm_sq: f64 = terms.iter().map(|(_, c)| c.norm_sqr()).sum();
        if norm_sq > 1e-6 {
            return PhotonState::renormalized(terms).expect("nonzero draw normalizes");
        }
    }
}

/// A random phase configuration with entries uniform in [0, 2*pi).
pub fn random_phases<R: Rng>(modes: usize, rng: &mut R) -> PhaseConfig {
    PhaseConfig::new((0..modes).map(|_| rng.gen::<f64>() * TAU).collect())
}

/// A random two-path state whose amplitude arguments step by a common
/// difference, so the closed-form visibility applies.
pub fn random_phase_matched_two_path<R: Rng>(photons: u32, rng: &mut R) -> PhotonState {
    let basis = enumerate_basis(2, photons).expect("two-path basis");
    let step = rng.gen::<f64>() * TAU;
    let base = rng.gen::<f64>() * TAU;
    loop {
        let moduli: Vec<f64> = basis.iter().map(|_| rng.gen::<f64>()).collect();
        let norm_sq: f64 = moduli.iter().map(|m| m * m).sum();
        if norm_sq <= 1e-6 {
            continue;
        }
        let scale = 1.0 / norm_sq.sqrt();
        let terms = basis
            .iter()
            .enumerate()
            .map(|(j, occ)| {
                (
                    occ.clone(),
                    Complex64::from_polar(moduli[j] * scale, base - j as f64 * step),
                )
            })
            .collect();
        return PhotonState::new(terms).expect("projected moduli are normalized");
    }
}
