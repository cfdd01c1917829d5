use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::Masker;
use crate::error::{Error, Result};
use crate::qcore::{
    cross_marginal, entanglement_entropy, linalg, partial_trace, trace_distance, Bipartition,
    DensityMatrix, PureState, Side, C64,
};
use crate::DEFAULT_TOL;

/// Images must carry more than this many bits of entanglement to count as
/// masked; product images would only move the information to one side.
pub const DEFAULT_ENTROPY_FLOOR: f64 = 1e-6;

/// Which masking conditions [`masking_defect`] checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Marginals of the listed states only.
    Set,
    /// Additionally require the cross marginals between reference-basis
    /// directions of the input span to vanish, so that no relative phase in
    /// that basis leaks into either marginal.
    Span,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "set" => Ok(Mode::Set),
            "span" => Ok(Mode::Span),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode {other:?} (expected set or span)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub tol: f64,
    pub entropy_floor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            entropy_floor: DEFAULT_ENTROPY_FLOOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDeviation {
    pub index: usize,
    pub dev_a: f64,
    pub dev_b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossNorm {
    pub i: usize,
    pub j: usize,
    /// Operator norm of `Tr_B(|Ψ_i⟩⟨Ψ_j|)`.
    pub norm_a: f64,
    /// Operator norm of `Tr_A(|Ψ_i⟩⟨Ψ_j|)`.
    pub norm_b: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaskingReport {
    pub mode: Mode,
    pub reference_marginal_a: DensityMatrix,
    pub reference_marginal_b: DensityMatrix,
    pub per_state_deviation: Vec<StateDeviation>,
    /// Pairs of span-basis directions; empty in set mode.
    pub cross_norms: Vec<CrossNorm>,
    pub span_dim: usize,
    pub entropies: Vec<f64>,
    pub defect: f64,
    pub tol: f64,
    pub entropy_floor: f64,
    pub verdict: bool,
}

impl MaskingReport {
    pub fn min_entropy(&self) -> f64 {
        self.entropies.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Orthonormal basis of the span of `states` used by span mode.
///
/// The states are first orthonormalized (pivoted modified Gram–Schmidt,
/// residuals below `1e-10` dropped) to get the span. When the span is the
/// whole space the computational basis is returned; otherwise the
/// computational basis vectors are projected onto the span and orthonormalized
/// the same way.
pub fn span_reference_basis(states: &[PureState]) -> Vec<DVector<C64>> {
    let Some(first) = states.first() else {
        return Vec::new();
    };
    let d = first.dim();
    let vectors: Vec<DVector<C64>> = states.iter().map(|s| s.amps().clone()).collect();
    let q = linalg::orthonormalize_pivoted(&vectors, DEFAULT_TOL);
    if q.len() == d {
        return (0..d)
            .map(|k| {
                let mut e = DVector::from_element(d, C64::new(0.0, 0.0));
                e[k] = C64::new(1.0, 0.0);
                e
            })
            .collect();
    }
    let projected: Vec<DVector<C64>> = (0..d)
        .map(|k| {
            q.iter()
                .fold(DVector::from_element(d, C64::new(0.0, 0.0)), |acc, qi| {
                    acc + qi * qi[k].conj()
                })
        })
        .collect();
    linalg::orthonormalize_pivoted(&projected, DEFAULT_TOL)
}

/// Masking defect with default thresholds (`tol = 1e-10`, entropy floor
/// `1e-6` bits) for the verdict.
pub fn masking_defect(v: &Masker, states: &[PureState], mode: Mode) -> Result<MaskingReport> {
    masking_defect_with(v, states, mode, Thresholds::default())
}

/// Computes the masking report of `v` on `states`.
///
/// Marginal deviations are trace distances to the marginals of the first
/// image; cross terms are measured by the operator norm. The defect is the
/// largest of all recorded numbers.
pub fn masking_defect_with(
    v: &Masker,
    states: &[PureState],
    mode: Mode,
    thresholds: Thresholds,
) -> Result<MaskingReport> {
    if states.is_empty() {
        return Err(Error::EmptyStateList);
    }
    if let Some(bad) = states.iter().position(|s| s.dim() != v.d_in()) {
        return Err(Error::DimensionMismatch(format!(
            "state {bad} has dimension {}, masker input dimension is {}",
            states[bad].dim(),
            v.d_in()
        )));
    }
    let ab = Bipartition::ab();
    let images = states
        .iter()
        .map(|s| v.apply(s))
        .collect::<Result<Vec<_>>>()?;
    let marginals = images
        .iter()
        .map(|img| Ok((partial_trace(img, &[0])?, partial_trace(img, &[1])?)))
        .collect::<Result<Vec<_>>>()?;
    let (ref_a, ref_b) = marginals[0].clone();

    let mut defect = 0.0f64;
    let mut per_state_deviation = Vec::with_capacity(states.len());
    for (index, (ma, mb)) in marginals.iter().enumerate() {
        let dev_a = trace_distance(ma, &ref_a)?;
        let dev_b = trace_distance(mb, &ref_b)?;
        defect = defect.max(dev_a).max(dev_b);
        per_state_deviation.push(StateDeviation {
            index,
            dev_a,
            dev_b,
        });
    }

    let mut cross_norms = Vec::new();
    let mut span_dim = 0;
    if mode == Mode::Span {
        let basis = span_reference_basis(states);
        span_dim = basis.len();
        let basis_images: Vec<PureState> = basis
            .into_iter()
            .map(|w| PureState::from_parts(v.iso() * w, v.output_dims()))
            .collect();
        for i in 0..basis_images.len() {
            for j in i + 1..basis_images.len() {
                let norm_a = linalg::operator_norm(&cross_marginal(
                    &basis_images[i],
                    &basis_images[j],
                    Side::B,
                )?);
                let norm_b = linalg::operator_norm(&cross_marginal(
                    &basis_images[i],
                    &basis_images[j],
                    Side::A,
                )?);
                defect = defect.max(norm_a).max(norm_b);
                cross_norms.push(CrossNorm {
                    i,
                    j,
                    norm_a,
                    norm_b,
                });
            }
        }
    }

    let entropies = images
        .iter()
        .map(|img| entanglement_entropy(img, &ab))
        .collect::<Result<Vec<_>>>()?;
    let min_entropy = entropies.iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = defect < thresholds.tol && min_entropy > thresholds.entropy_floor;

    Ok(MaskingReport {
        mode,
        reference_marginal_a: ref_a,
        reference_marginal_b: ref_b,
        per_state_deviation,
        cross_norms,
        span_dim,
        entropies,
        defect,
        tol: thresholds.tol,
        entropy_floor: thresholds.entropy_floor,
        verdict,
    })
}

/// Span-mode check: masked iff the defect is below `tol` and every image
/// carries more than `entropy_floor` bits of entanglement.
pub fn is_masked(
    v: &Masker,
    states: &[PureState],
    tol: f64,
    entropy_floor: f64,
) -> Result<(bool, MaskingReport)> {
    let report = masking_defect_with(
        v,
        states,
        Mode::Span,
        Thresholds { tol, entropy_floor },
    )?;
    Ok((report.verdict, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::masklib::{diagonal_masker, hyperdisk_state, masker_from_images};
    use crate::qcore::{DimProfile, PureState};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    const S: f64 = FRAC_1_SQRT_2;

    fn disk(phi: f64) -> PureState {
        hyperdisk_state(&[S, S], &[0.0, phi]).unwrap()
    }

    fn basis2(k: usize) -> PureState {
        PureState::ket(2, k).unwrap()
    }

    #[test]
    fn sharp_masks_disk_samples_in_span_mode() {
        let v = diagonal_masker(2).unwrap();
        let r = masking_defect(&v, &[disk(0.0), disk(FRAC_PI_2), disk(PI)], Mode::Span).unwrap();
        assert!(r.defect < 1e-12, "{}", r.defect);
        assert!(r.verdict);
        assert_eq!(r.span_dim, 2);
        assert_eq!(r.cross_norms.len(), 1);
    }

    #[test]
    fn sharp_zero_vs_plus_set_mode() {
        let v = diagonal_masker(2).unwrap();
        let r = masking_defect(&v, &[basis2(0), disk(0.0)], Mode::Set).unwrap();
        assert!((r.defect - 0.5).abs() < 1e-14);
        assert!(r.cross_norms.is_empty());
        assert!(!r.verdict);
    }

    #[test]
    fn product_images_fail_on_entropy() {
        // {|00⟩, |01⟩}: A marginals agree, B marginals are orthogonal
        let dims = DimProfile::bipartite(2, 2).unwrap();
        let v = masker_from_images(&[
            PureState::basis(dims.clone(), 0).unwrap(),
            PureState::basis(dims, 1).unwrap(),
        ])
        .unwrap();
        let r = masking_defect(&v, &[basis2(0), basis2(1)], Mode::Set).unwrap();
        assert_eq!(r.per_state_deviation[1].dev_a, 0.0);
        assert!((r.per_state_deviation[1].dev_b - 1.0).abs() < 1e-14);
        assert!(r.entropies.iter().all(|&e| e == 0.0));
        assert!(!r.verdict);
        let (masked, _) = is_masked(&v, &[basis2(0), basis2(1)], 1e-10, 1e-6).unwrap();
        assert!(!masked);
    }

    #[test]
    fn sharp_images_on_basis_states() {
        // {|00⟩, |11⟩} leaves the basis label in both marginals
        let v = diagonal_masker(2).unwrap();
        let r = masking_defect(&v, &[basis2(0), basis2(1)], Mode::Set).unwrap();
        assert!((r.per_state_deviation[1].dev_a - 1.0).abs() < 1e-14);
        assert!((r.per_state_deviation[1].dev_b - 1.0).abs() < 1e-14);
        assert!(r.entropies.iter().all(|&e| e == 0.0));
        assert!(!r.verdict);
    }

    #[test]
    fn swap_loophole_singleton() {
        // a single input with a product image has zero marginal deviation
        // but must still be rejected
        let dims = DimProfile::bipartite(2, 2).unwrap();
        let v = masker_from_images(&[
            PureState::basis(dims.clone(), 0).unwrap(),
            PureState::basis(dims, 1).unwrap(),
        ])
        .unwrap();
        let (masked, r) = is_masked(&v, &[disk(0.3)], 1e-10, 1e-6).unwrap();
        assert!(r.defect < 1e-15);
        assert!(!masked);
    }

    #[test]
    fn tomographic_set_is_not_masked() {
        let v = diagonal_masker(2).unwrap();
        let states = [basis2(0), basis2(1), disk(0.0), disk(FRAC_PI_2)];
        let (masked, r) = is_masked(&v, &states, 1e-10, 1e-6).unwrap();
        assert!(!masked);
        // |0⟩ ↦ |00⟩ has marginal |0⟩⟨0|, |1⟩ ↦ |11⟩ has |1⟩⟨1|
        assert!((r.defect - 1.0).abs() < 1e-14);
        assert!((r.per_state_deviation[2].dev_a - 0.5).abs() < 1e-14);
    }

    #[test]
    fn classical_bit_masker_masks_basis_but_not_span() {
        let bell = |sign: f64| {
            PureState::new(
                DVector::from_vec(vec![
                    C64::new(S, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(sign * S, 0.0),
                ]),
                DimProfile::bipartite(2, 2).unwrap(),
            )
            .unwrap()
        };
        let v = masker_from_images(&[bell(1.0), bell(-1.0)]).unwrap();
        let set = masking_defect(&v, &[basis2(0), basis2(1)], Mode::Set).unwrap();
        assert!(set.defect < 1e-15 && set.verdict);
        // superpositions of the two bits leak: Tr_B(|Φ+⟩⟨Φ-|) = diag(1/2, -1/2)
        let span = masking_defect(&v, &[basis2(0), basis2(1)], Mode::Span).unwrap();
        assert!((span.defect - 0.5).abs() < 1e-14);
        assert!(!span.verdict);
    }

    #[test]
    fn partial_span_basis() {
        let plus = disk(0.0);
        let b = span_reference_basis(&[plus.clone(), plus.with_global_phase(1.0)]);
        assert_eq!(b.len(), 1);
        assert!((b[0].dotc(plus.amps()).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        let v = diagonal_masker(2).unwrap();
        assert!(matches!(masking_defect(&v, &[], Mode::Set), Err(Error::EmptyStateList)));
        assert!(matches!(
            masking_defect(&v, &[PureState::ket(3, 0).unwrap()], Mode::Set),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("span".parse::<Mode>().unwrap(), Mode::Span);
        assert!("both".parse::<Mode>().is_err());
    }
}
