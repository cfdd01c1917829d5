//! Dense multi-start sweep for the smallest masking defect reachable on the
//! tomographic qubit set `{|0⟩, |1⟩, |+⟩, |+i⟩}`.
//!
//! This deliberately shares nothing with the witness optimizer except the
//! defect evaluation: isometries come from the QR factor of an unconstrained
//! complex matrix, and the canonical (non-smooth) defect is minimized
//! directly with restarted Nelder–Mead. The floors it writes are what the
//! acceptance suite compares the witness against.

use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use masking::optim::nelder_mead;
use masking::{masking_defect, Masker, Mode, PureState, C64};
use masking_bench::tomographic_set;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde_json::json;

#[derive(Parser)]
#[command(about = "Estimate no-masking defect floors by brute-force search")]
struct Args {
    /// Random starts per ancilla dimension.
    #[arg(long, default_value_t = 1000)]
    restarts: usize,
    /// Ancilla dimensions to sweep.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    d_b: Vec<usize>,
    #[arg(long, default_value_t = 0x0f10_0c1e)]
    seed: u64,
    /// Fraction of the best defect found that is recorded as the floor.
    #[arg(long, default_value_t = 0.9)]
    safety_margin: f64,
    /// Simplex restarts from the previous optimum within one start.
    #[arg(long, default_value_t = 3)]
    polish: usize,
    #[arg(long, default_value = "crates/cli/tests/fixtures/floors.json")]
    out: PathBuf,
}

fn stiefel(params: &[f64], rows: usize, cols: usize) -> DMatrix<C64> {
    let raw = DMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        C64::new(params[k], params[k + 1])
    });
    raw.qr().q()
}

fn defect(params: &[f64], states: &[PureState], d_b: usize) -> f64 {
    let d_a = states[0].dim();
    let masker = Masker::new(stiefel(params, d_a * d_b, d_a), d_a, d_b).expect("QR gives an isometry");
    masking_defect(&masker, states, Mode::Span).expect("valid inputs").defect
}

fn main() {
    let args = Args::parse();
    let states = tomographic_set();
    let d_a = states[0].dim();
    let mut per_db = serde_json::Map::new();

    for &d_b in &args.d_b {
        let n = 2 * d_a * d_b * d_a;
        let t = Instant::now();
        let mut found: Vec<f64> = (0..args.restarts)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(args.seed.wrapping_add((d_b as u64) << 32 | r as u64));
                let mut x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
                let mut best = f64::INFINITY;
                for round in 0..=args.polish {
                    let step = 0.5 / (1 << round) as f64;
                    let m = nelder_mead(|p| defect(p, &states, d_b), &x, step, 1e-13, 0.0, 400 * n);
                    x = m.x;
                    best = best.min(m.value);
                }
                best
            })
            .collect();
        found.sort_by(f64::total_cmp);
        let min = found[0];
        let median = found[found.len() / 2];
        let secs = t.elapsed().as_secs_f64();
        eprintln!("dB={d_b}: min {min:.6} median {median:.6} max {:.6} ({secs:.1}s)", found[found.len() - 1]);
        per_db.insert(
            d_b.to_string(),
            json!({
                "oracle_min": min,
                "oracle_median": median,
                "floor": min * args.safety_margin,
                "runtime_seconds": (secs * 10.0).round() / 10.0,
            }),
        );
    }

    let doc = json!({
        "tomographic_qubit": {
            "states": ["|0>", "|1>", "|+>", "|+i>"],
            "mode": "span",
            "metric": "canonical masking defect",
            "search": "QR-parameterized isometries, Nelder-Mead on the defect",
            "restarts": args.restarts,
            "polish_rounds": args.polish,
            "seed": args.seed,
            "safety_margin": args.safety_margin,
            "dB": per_db,
        }
    });
    if let Some(dir) = args.out.parent() {
        std::fs::create_dir_all(dir).expect("create fixture directory");
    }
    std::fs::write(&args.out, serde_json::to_string_pretty(&doc).unwrap() + "\n").expect("write floors");
    eprintln!("wrote {}", args.out.display());
}
