use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::masklib::{Masker, DEFAULT_ENTROPY_FLOOR};
use crate::qcore::{
    entanglement_entropy, partial_trace, random_state_on, trace_distance, Bipartition,
    DensityMatrix, DimProfile,
};

/// Default marginal tolerance of [`probe_maskable_family`].
pub const DEFAULT_PROBE_TOL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub index: usize,
    pub dev_a: f64,
    pub dev_b: f64,
    pub entropy: f64,
    /// `|⟨k|ψ⟩|` for every input basis state.
    pub profile: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub entropy_floor: f64,
    /// Marginals of the image of the maximally mixed input.
    pub reference_marginal_a: DensityMatrix,
    pub reference_marginal_b: DensityMatrix,
    pub masked_count: usize,
    pub masked: Vec<ProbeSample>,
    /// Largest `max_k |p_k - q_k|` over pairs of masked profiles; `None`
    /// when fewer than two inputs were masked.
    pub profile_spread: Option<f64>,
}

impl ProbeReport {
    /// Flattened masked-sample table: `index,dev_a,dev_b,entropy,r0,...`.
    pub fn to_csv(&self, d_in: usize) -> String {
        let mut out = String::from("index,dev_a,dev_b,entropy");
        for k in 0..d_in {
            out.push_str(&format!(",r{k}"));
        }
        out.push('\n');
        for s in &self.masked {
            out.push_str(&format!("{},{:e},{:e},{:e}", s.index, s.dev_a, s.dev_b, s.entropy));
            for r in &s.profile {
                out.push_str(&format!(",{r:.17e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// [`probe_maskable_family_with`] at the default tolerances.
pub fn probe_maskable_family(v: &Masker, samples: usize, seed: u64) -> Result<ProbeReport> {
    probe_maskable_family_with(v, samples, seed, DEFAULT_PROBE_TOL, DEFAULT_ENTROPY_FLOOR)
}

/// Draws Haar-random inputs and keeps those whose image marginals lie within
/// `tol` (trace distance, both sides) of the image marginals of the maximally
/// mixed input and whose image is entangled beyond `entropy_floor`. The
/// amplitude moduli of the kept inputs describe the family the masker hides,
/// as far as the sample shows.
pub fn probe_maskable_family_with(
    v: &Masker,
    samples: usize,
    seed: u64,
    tol: f64,
    entropy_floor: f64,
) -> Result<ProbeReport> {
    let d_in = v.d_in();
    let mixed = DensityMatrix::maximally_mixed(DimProfile::single(d_in)?);
    let joint = v.apply_density(&mixed)?;
    let ref_a = partial_trace(&joint, &[0])?;
    let ref_b = partial_trace(&joint, &[1])?;

    let in_dims = DimProfile::single(d_in)?;
    let cut = Bipartition::ab();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut masked = Vec::new();
    for index in 0..samples {
        let psi = random_state_on(&in_dims, &mut rng)?;
        let img = v.apply(&psi)?;
        let dev_a = trace_distance(&partial_trace(&img, &[0])?, &ref_a)?;
        let dev_b = trace_distance(&partial_trace(&img, &[1])?, &ref_b)?;
        if dev_a >= tol || dev_b >= tol {
            continue;
        }
        let entropy = entanglement_entropy(&img, &cut)?;
        if entropy <= entropy_floor {
            continue;
        }
        masked.push(ProbeSample {
            index,
            dev_a,
            dev_b,
            entropy,
            profile: psi.amps().iter().map(|z| z.norm()).collect(),
        });
    }

    let mut spread: Option<f64> = None;
    for i in 0..masked.len() {
        for j in i + 1..masked.len() {
            let d = masked[i]
                .profile
                .iter()
                .zip(&masked[j].profile)
                .fold(0.0f64, |acc, (p, q)| acc.max((p - q).abs()));
            spread = Some(spread.map_or(d, |s: f64| s.max(d)));
        }
    }

    Ok(ProbeReport {
        samples,
        seed,
        tol,
        entropy_floor,
        reference_marginal_a: ref_a,
        reference_marginal_b: ref_b,
        masked_count: masked.len(),
        masked,
        profile_spread: spread,
    })
}
