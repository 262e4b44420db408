//! Interference intensity, fringe sampling, and fringe visibility.
//!
//! The intensity behind the phase shifters is a quadratic form in the
//! one-body matrix: I(alpha) = N + 2 Re sum_{i<j} e^{i(alpha_i - alpha_j)}
//! M_ji, reported in units of the squared field scale. Visibility is
//! (I_max - I_min) / (I_max + I_min) with the extrema taken over the torus
//! of relative phases.

use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{one_body_matrix, wrap_angle, PhaseConfig, PhotonState};
use crate::optimize::{self, TorusSearchConfig};

/// Band inside which a negative intensity counts as float noise.
const CLAMP_BAND: f64 = 1e-12;

/// Tolerance on consecutive argument differences for phase-match detection.
const PHASE_MATCH_TOLERANCE: f64 = 1e-9;

pub(crate) fn clamp_intensity(value: f64) -> f64 {
    if value < 0.0 && value > -CLAMP_BAND {
        0.0
    } else {
        value
    }
}

/// Precomputed quadratic form for evaluating I(alpha) cheaply.
///
/// The one-body matrix does not depend on the phases, so one kernel serves
/// any number of intensity or gradient evaluations.
pub(crate) struct IntensityKernel {
    matrix: Array2<Complex64>,
    photons: f64,
    modes: usize,
}

impl IntensityKernel {
    pub(crate) fn new(state: &PhotonState) -> Self {
        Self {
            matrix: one_body_matrix(state),
            photons: state.photons() as f64,
            modes: state.modes(),
        }
    }

    pub(crate) fn modes(&self) -> usize {
        self.modes
    }

    /// Raw intensity (no noise clamp) in units of |epsilon0|^2.
    pub(crate) fn eval(&self, phases: &[f64]) -> f64 {
        debug_assert_eq!(phases.len(), self.modes);
        let units: Vec<Complex64> = phases
            .iter()
            .map(|&a| Complex64::from_polar(1.0, a))
            .collect();
        self.eval_units(&units)
    }

    /// Same as [`eval`], with the per-mode phase factors already formed.
    pub(crate) fn eval_units(&self, units: &[Complex64]) -> f64 {
        let mut cross = Complex64::new(0.0, 0.0);
        for i in 0..self.modes {
            for j in (i + 1)..self.modes {
                cross += units[i] * units[j].conj() * self.matrix[(j, i)];
            }
        }
        self.photons + 2.0 * cross.re
    }

    /// Analytic gradient dI/dalpha_k = -2 Im sum_{j != k} e^{i(a_k - a_j)} M_jk.
    pub(crate) fn gradient(&self, phases: &[f64], out: &mut [f64]) {
        debug_assert_eq!(phases.len(), self.modes);
        debug_assert_eq!(out.len(), self.modes);
        let units: Vec<Complex64> = phases
            .iter()
            .map(|&a| Complex64::from_polar(1.0, a))
            .collect();
        for k in 0..self.modes {
            let mut z = Complex64::new(0.0, 0.0);
            for j in 0..self.modes {
                if j != k {
                    z += units[k] * units[j].conj() * self.matrix[(j, k)];
                }
            }
            out[k] = -2.0 * z.im;
        }
    }
}

/// Intensity of a state behind per-path phase shifts, in units of |epsilon0|^2.
pub fn intensity(state: &PhotonState, phases: &PhaseConfig) -> Result<f64> {
    if phases.len() != state.modes() {
        return Err(Error::PhaseLengthMismatch {
            expected: state.modes(),
            got: phases.len(),
        });
    }
    Ok(clamp_intensity(
        IntensityKernel::new(state).eval(phases.phases()),
    ))
}

/// Intensity samples along one mode's phase, other phases held at zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FringeCurve {
    pub varying_mode: usize,
    /// (phase in radians, intensity in units of |epsilon0|^2) pairs.
    pub samples: Vec<(f64, f64)>,
}

impl FringeCurve {
    /// CSV rendering with header `phase_rad,intensity`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phase_rad,intensity\n");
        for (phase, intensity) in &self.samples {
            out.push_str(&format!("{phase},{intensity}\n"));
        }
        out
    }
}

/// Sample the fringe along `varying_mode` at equally spaced phases in [0, 2*pi).
pub fn fringe_curve(
    state: &PhotonState,
    varying_mode: usize,
    samples: usize,
) -> Result<FringeCurve> {
    if varying_mode >= state.modes() {
        return Err(Error::ModeIndexOutOfRange {
            index: varying_mode,
            modes: state.modes(),
        });
    }
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    let kernel = IntensityKernel::new(state);
    let mut phases = vec![0.0; state.modes()];
    let curve = (0..samples)
        .map(|k| {
            let beta = TAU * k as f64 / samples as f64;
            phases[varying_mode] = beta;
            (beta, clamp_intensity(kernel.eval(&phases)))
        })
        .collect();
    Ok(FringeCurve {
        varying_mode,
        samples: curve,
    })
}

/// How a visibility figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMethod {
    Scan1D,
    TorusSearch,
    Analytic,
}

/// Extremal intensities, the visibility, and the phases achieving each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisibilityResult {
    pub i_max: f64,
    pub i_min: f64,
    pub visibility: f64,
    pub phases_at_max: PhaseConfig,
    pub phases_at_min: PhaseConfig,
    pub method: SearchMethod,
}

impl VisibilityResult {
    pub(crate) fn from_extrema(
        i_max: f64,
        i_min: f64,
        phases_at_max: PhaseConfig,
        phases_at_min: PhaseConfig,
        method: SearchMethod,
    ) -> Self {
        let i_min = clamp_intensity(i_min);
        let i_max = clamp_intensity(i_max).max(i_min);
        let visibility = if i_max == i_min {
            0.0
        } else {
            (i_max - i_min) / (i_max + i_min)
        };
        Self {
            i_max,
            i_min,
            visibility,
            phases_at_max,
            phases_at_min,
            method,
        }
    }

    /// JSON rendering; phases are reported in [0, 2*pi) rounded to 12
    /// significant digits.
    pub fn to_json(&self) -> serde_json::Value {
        let round = |p: &PhaseConfig| -> Vec<f64> {
            p.phases().iter().map(|&x| round_sig12(x)).collect()
        };
        serde_json::json!({
            "i_max": self.i_max,
            "i_min": self.i_min,
            "visibility": self.visibility,
            "phases_at_max": round(&self.phases_at_max),
            "phases_at_min": round(&self.phases_at_min),
            "method": self.method,
        })
    }
}

fn round_sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("rounded float reparses")
}

/// Fringe visibility via extremization of I(alpha) over the torus of
/// relative phases (the last mode's phase is gauge-fixed to zero).
pub fn visibility(state: &PhotonState, search: &TorusSearchConfig) -> VisibilityResult {
    let kernel = IntensityKernel::new(state);
    let (min_phases, raw_min) =
        optimize::extremize_phases(&kernel, search, optimize::Direction::Minimize);
    let (max_phases, raw_max) =
        optimize::extremize_phases(&kernel, search, optimize::Direction::Maximize);
    VisibilityResult::from_extrema(
        raw_max,
        raw_min,
        PhaseConfig::new(max_phases),
        PhaseConfig::new(min_phases),
        SearchMethod::TorusSearch,
    )
}

/// Visibility from a one-dimensional scan of a single mode's phase.
///
/// For two paths this sweeps the only relative phase; for more paths it
/// bounds the torus-search visibility from below.
pub fn visibility_from_fringe(
    state: &PhotonState,
    varying_mode: usize,
    samples: usize,
) -> Result<VisibilityResult> {
    let curve = fringe_curve(state, varying_mode, samples)?;
    let mut best_max = curve.samples[0];
    let mut best_min = curve.samples[0];
    for &(phase, value) in &curve.samples[1..] {
        if value > best_max.1 {
            best_max = (phase, value);
        }
        if value < best_min.1 {
            best_min = (phase, value);
        }
    }
    let mut at_max = vec![0.0; state.modes()];
    at_max[varying_mode] = best_max.0;
    let mut at_min = vec![0.0; state.modes()];
    at_min[varying_mode] = best_min.0;
    Ok(VisibilityResult::from_extrema(
        best_max.1,
        best_min.1,
        PhaseConfig::new(at_max),
        PhaseConfig::new(at_min),
        SearchMethod::Scan1D,
    ))
}

/// Closed-form two-path visibility for phase-matched amplitudes:
/// (2/n) sum_j sqrt((n-j)(j+1)) |c_{j+1} c_{j+2}|.
///
/// `moduli` lists |c_1| .. |c_{n+1}| ordered from all photons in the first
/// path to all photons in the second. The value equals the numeric
/// visibility exactly when consecutive amplitude-argument differences are
/// constant mod 2*pi; see [`two_path_phase_matched`].
pub fn two_path_visibility_analytic(moduli: &[f64]) -> Result<f64> {
    if moduli.len() < 2 {
        return Err(Error::ZeroPhotons);
    }
    if moduli.iter().any(|&m| !m.is_finite() || m < 0.0) {
        return Err(Error::NegativeModulus);
    }
    let sum_sq: f64 = moduli.iter().map(|m| m * m).sum();
    if (sum_sq - 1.0).abs() > 1e-9 {
        return Err(Error::ModuliNotNormalized(sum_sq));
    }
    let n = moduli.len() - 1;
    let sum: f64 = (0..n)
        .map(|j| (((n - j) * (j + 1)) as f64).sqrt() * moduli[j] * moduli[j + 1])
        .sum();
    Ok(2.0 / n as f64 * sum)
}

/// Whether a two-path state's consecutive amplitude-argument differences are
/// constant mod 2*pi (within 1e-9), the regime of the closed-form visibility.
///
/// Pairs involving an absent or zero-amplitude term impose no constraint.
pub fn two_path_phase_matched(state: &PhotonState) -> Result<bool> {
    if state.modes() != 2 {
        return Err(Error::ModeCountMismatch {
            expected: 2,
            got: state.modes(),
        });
    }
    let n = state.photons() as usize;
    let mut args: Vec<Option<f64>> = vec![None; n + 1];
    for t in state.terms() {
        if t.modulus() > 0.0 {
            args[t.occupation().count(1) as usize] = Some(t.argument());
        }
    }
    let mut common: Option<f64> = None;
    for j in 0..n {
        if let (Some(a), Some(b)) = (args[j], args[j + 1]) {
            let delta = wrap_angle(a - b);
            match common {
                None => common = Some(delta),
                Some(reference) => {
                    if circle_distance(delta, reference) > PHASE_MATCH_TOLERANCE {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OccupationVector;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn occ(counts: &[u32]) -> OccupationVector {
        OccupationVector::new(counts.to_vec()).unwrap()
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn balanced_single_photon() -> PhotonState {
        let c = re(1.0 / 2.0_f64.sqrt());
        PhotonState::new(vec![(occ(&[1, 0]), c), (occ(&[0, 1]), c)]).unwrap()
    }

    fn chain_two_photon() -> PhotonState {
        PhotonState::new(vec![
            (occ(&[2, 0]), re(0.5)),
            (occ(&[1, 1]), re(1.0 / 2.0_f64.sqrt())),
            (occ(&[0, 2]), re(0.5)),
        ])
        .unwrap()
    }

    fn noon(n: u32) -> PhotonState {
        let c = re(1.0 / 2.0_f64.sqrt());
        PhotonState::new(vec![(occ(&[n, 0]), c), (occ(&[0, n]), c)]).unwrap()
    }

    #[test]
    fn intensity_of_balanced_single_photon() {
        let state = balanced_single_photon();
        let bright = intensity(&state, &PhaseConfig::zeros(2)).unwrap();
        assert_abs_diff_eq!(bright, 2.0, epsilon = 1e-12);
        let dark = intensity(&state, &PhaseConfig::new(vec![PI, 0.0])).unwrap();
        assert_abs_diff_eq!(dark, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn intensity_of_two_photon_chain_at_zero_phase() {
        let value = intensity(&chain_two_photon(), &PhaseConfig::zeros(2)).unwrap();
        assert_abs_diff_eq!(value, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn intensity_sees_only_phase_differences() {
        let state = chain_two_photon();
        let base = intensity(&state, &PhaseConfig::new(vec![0.4, 1.9])).unwrap();
        let shifted = intensity(&state, &PhaseConfig::new(vec![0.4 + 0.7, 1.9 + 0.7])).unwrap();
        assert_abs_diff_eq!(base, shifted, epsilon = 1e-12);
    }

    #[test]
    fn fringe_of_balanced_single_photon() {
        let curve = fringe_curve(&balanced_single_photon(), 0, 4).unwrap();
        let values: Vec<f64> = curve.samples.iter().map(|s| s.1).collect();
        assert_abs_diff_eq!(values[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(values[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(values[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(values[3], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fringe_of_noon_state_is_flat() {
        let curve = fringe_curve(&noon(2), 0, 16).unwrap();
        for &(_, value) in &curve.samples {
            assert_abs_diff_eq!(value, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fringe_of_single_term_state_is_flat_at_one() {
        let state = PhotonState::new(vec![(occ(&[1, 0]), re(1.0))]).unwrap();
        let curve = fringe_curve(&state, 0, 8).unwrap();
        for &(_, value) in &curve.samples {
            assert_abs_diff_eq!(value, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fringe_rejects_bad_arguments() {
        let state = balanced_single_photon();
        assert!(matches!(
            fringe_curve(&state, 5, 8),
            Err(Error::ModeIndexOutOfRange { index: 5, modes: 2 })
        ));
        assert!(matches!(
            fringe_curve(&state, 0, 1),
            Err(Error::TooFewSamples(1))
        ));
    }

    #[test]
    fn csv_has_header_and_one_row_per_sample() {
        let curve = fringe_curve(&balanced_single_photon(), 0, 8).unwrap();
        let csv = curve.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "phase_rad,intensity");
        assert_eq!(lines.len(), 9);
    }

    #[test]
    fn visibility_of_generic_single_photon_is_2c1c2() {
        let (c1, c2) = (0.6, 0.8);
        let state =
            PhotonState::new(vec![(occ(&[1, 0]), re(c1)), (occ(&[0, 1]), re(c2))]).unwrap();
        let result = visibility(&state, &TorusSearchConfig::default());
        assert_abs_diff_eq!(result.visibility, 2.0 * c1 * c2, epsilon = 1e-9);
        assert!(result.i_max >= result.i_min);
    }

    #[test]
    fn visibility_of_uniform_three_path_single_photon_is_one() {
        let c = re(1.0 / 3.0_f64.sqrt());
        let state = PhotonState::new(vec![
            (occ(&[1, 0, 0]), c),
            (occ(&[0, 1, 0]), c),
            (occ(&[0, 0, 1]), c),
        ])
        .unwrap();
        let result = visibility(&state, &TorusSearchConfig::default());
        assert_abs_diff_eq!(result.visibility, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(result.i_min, 0.0, epsilon = 1e-9);
        // the dark point sits at relative phases (2pi/3, 4pi/3) up to the
        // conjugate minimum (4pi/3, 2pi/3)
        let p = result.phases_at_min.phases();
        let beta12 = wrap_angle(p[0] - p[1]);
        let beta13 = wrap_angle(p[0] - p[2]);
        let direct = (beta12 - 2.0 * PI / 3.0).abs() < 1e-5 && (beta13 - 4.0 * PI / 3.0).abs() < 1e-5;
        let conjugate =
            (beta12 - 4.0 * PI / 3.0).abs() < 1e-5 && (beta13 - 2.0 * PI / 3.0).abs() < 1e-5;
        assert!(direct || conjugate, "unexpected dark point {p:?}");
    }

    #[test]
    fn visibility_scan_matches_torus_search_for_two_paths() {
        let state = chain_two_photon();
        let scan = visibility_from_fringe(&state, 0, 720).unwrap();
        let torus = visibility(&state, &TorusSearchConfig::default());
        assert_eq!(scan.method, SearchMethod::Scan1D);
        assert_abs_diff_eq!(scan.visibility, torus.visibility, epsilon = 1e-4);
    }

    #[test]
    fn analytic_two_path_values() {
        let s = 1.0 / 2.0_f64.sqrt();
        assert_abs_diff_eq!(
            two_path_visibility_analytic(&[s, s]).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            two_path_visibility_analytic(&[0.5, s, 0.5]).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            two_path_visibility_analytic(&[s, 0.0, s]).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        let root6_over4 = 6.0_f64.sqrt() / 4.0;
        assert_abs_diff_eq!(
            two_path_visibility_analytic(&[0.25, 0.5, root6_over4, 0.5, 0.25]).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn analytic_values_away_from_the_optimum() {
        // hand-evaluated: (2/2) * sqrt(2) * (m1 m2 + m2 m3) at uniform moduli
        let third = 1.0 / 3.0_f64.sqrt();
        assert_abs_diff_eq!(
            two_path_visibility_analytic(&[third, third, third]).unwrap(),
            2.0 * 2.0_f64.sqrt() / 3.0,
            epsilon = 1e-12
        );
        // (2/3) * (sqrt(3) m1 m2 + 2 m2 m3 + sqrt(3) m3 m4) at uniform moduli
        let half = 0.5;
        assert_abs_diff_eq!(
            two_path_visibility_analytic(&[half, half, half, half]).unwrap(),
            (2.0 / 3.0) * (3.0_f64.sqrt() * 0.25 + 2.0 * 0.25 + 3.0_f64.sqrt() * 0.25),
            epsilon = 1e-12
        );
    }

    #[test]
    fn analytic_rejects_bad_moduli() {
        assert!(matches!(
            two_path_visibility_analytic(&[0.9, 0.9]),
            Err(Error::ModuliNotNormalized(_))
        ));
        assert!(matches!(
            two_path_visibility_analytic(&[-0.6, 0.8]),
            Err(Error::NegativeModulus)
        ));
    }

    #[test]
    fn phase_match_detection() {
        let matched = PhotonState::new(vec![
            (occ(&[2, 0]), Complex64::from_polar(0.5, 1.0)),
            (occ(&[1, 1]), Complex64::from_polar(1.0 / 2.0_f64.sqrt(), 0.6)),
            (occ(&[0, 2]), Complex64::from_polar(0.5, 0.2)),
        ])
        .unwrap();
        assert!(two_path_phase_matched(&matched).unwrap());

        let unmatched = PhotonState::new(vec![
            (occ(&[2, 0]), Complex64::from_polar(0.5, 1.0)),
            (occ(&[1, 1]), Complex64::from_polar(1.0 / 2.0_f64.sqrt(), 0.6)),
            (occ(&[0, 2]), Complex64::from_polar(0.5, 0.4)),
        ])
        .unwrap();
        assert!(!two_path_phase_matched(&unmatched).unwrap());

        // a zero middle amplitude leaves the outer arguments unconstrained
        let gapped = PhotonState::new(vec![
            (occ(&[2, 0]), Complex64::from_polar(1.0 / 2.0_f64.sqrt(), 2.3)),
            (occ(&[1, 1]), re(0.0)),
            (occ(&[0, 2]), Complex64::from_polar(1.0 / 2.0_f64.sqrt(), 0.9)),
        ])
        .unwrap();
        assert!(two_path_phase_matched(&gapped).unwrap());
    }
}
