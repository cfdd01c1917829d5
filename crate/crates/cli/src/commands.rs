use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use masking::io::{masker_from_json, state_from_json, states_from_json};
use masking::masklib::masking_defect_with;
use masking::witness::probe_maskable_family_with as probe_family;
use masking::{
    cheat, classical_bit_masker, commit as commit_state, diagonal_masker, multiparty_masker,
    optimize_masker, Error, Masker, OptimizerConfig,
    PureState, Thresholds, C64,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{CommitArgs, MaskArgs, MaskerSource, ProbeArgs, WitnessArgs};
use crate::manifest::{Input, RunManifest};
use crate::Verdict;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_states(path: &Path) -> Result<Vec<PureState>> {
    states_from_json(&read(path)?).with_context(|| format!("invalid state list in {}", path.display()))
}

fn builtin_masker(name: &str) -> Result<Masker> {
    let dim = |arg: &str| -> Result<usize> {
        arg.parse().with_context(|| format!("invalid dimension {arg:?} in builtin {name:?}"))
    };
    let masker = match name.split_once(':') {
        Some(("sharp", d)) => diagonal_masker(dim(d)?)?,
        Some(("multiparty", d)) => multiparty_masker(dim(d)?)?,
        None if name == "classical-bit" => classical_bit_masker(),
        _ => bail!("unknown builtin {name:?}; expected sharp:<d>, classical-bit or multiparty:<d>"),
    };
    Ok(masker)
}

fn load_masker(source: &MaskerSource) -> Result<(Masker, Input)> {
    match (&source.builtin, &source.masker) {
        (Some(name), _) => Ok((builtin_masker(name)?, Input::builtin("masker", name))),
        (None, Some(path)) => {
            let v = masker_from_json(&read(path)?)
                .with_context(|| format!("invalid masker in {}", path.display()))?;
            Ok((v, Input::file("masker", path)))
        }
        (None, None) => bail!("one of --builtin or --masker is required"),
    }
}

#[derive(Serialize)]
struct Output<'a, T: Serialize> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: T,
}

fn emit<T: Serialize>(manifest: &RunManifest, body: T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&Output { manifest, body })?;
    text.push('\n');
    match &manifest.output {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn mask(args: &MaskArgs) -> Result<Verdict> {
    let (v, masker_input) = load_masker(&args.source)?;
    let states = load_states(&args.states)?;
    let thresholds = Thresholds {
        tol: args.thresholds.tol,
        entropy_floor: args.thresholds.entropy_floor,
    };
    let report = masking_defect_with(&v, &states, args.mode, thresholds)?;
    let images = states.iter().map(|s| v.apply(s)).collect::<masking::Result<Vec<_>>>()?;

    let mut manifest = RunManifest::new("mask");
    manifest.inputs = vec![masker_input, Input::file("states", &args.states)];
    manifest.config = json!({ "mode": args.mode, "tol": thresholds.tol, "entropy_floor": thresholds.entropy_floor });
    manifest.output = args.out.clone();
    eprintln!(
        "defect {:.3e}, min entropy {:.6} bits -> {}",
        report.defect,
        report.min_entropy(),
        if report.verdict { "masked" } else { "NOT masked" }
    );
    let verdict = report.verdict;
    emit(&manifest, json!({ "images": images, "report": report }))?;
    Ok(if verdict { Verdict::Positive } else { Verdict::Negative })
}

pub fn witness(args: &WitnessArgs) -> Result<Verdict> {
    let states = load_states(&args.states)?;
    let mut cfg: OptimizerConfig = match &args.config {
        Some(path) => serde_json::from_str(&read(path)?)
            .with_context(|| format!("invalid optimizer config in {}", path.display()))?,
        None => OptimizerConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    cfg.validate()?;
    let result = optimize_masker(&states, &cfg)?;

    let mut table = String::new();
    writeln!(table, "restart  seed                  iters  converged  defect")?;
    for t in &result.restarts {
        writeln!(table, "{:>7}  {:<20}  {:>5}  {:<9}  {:.6e}", t.restart, t.seed, t.iterations, t.converged, t.defect)?;
    }
    eprint!("{table}");
    eprintln!("floor estimate {:.6e} (restart {})", result.best_defect, result.best_restart);

    let mut manifest = RunManifest::new("witness");
    manifest.inputs.push(Input::file("states", &args.states));
    if let Some(path) = &args.config {
        manifest.inputs.push(Input::file("config", path));
    }
    manifest.config = serde_json::to_value(&cfg)?;
    manifest.seed = Some(cfg.seed);
    manifest.output = args.out.clone();
    emit(&manifest, json!({ "floor_estimate": result.best_defect, "result": result }))?;
    Ok(Verdict::Positive)
}

/// `Σ_k e^{ikφ} ψ_k |k⟩`.
fn phase_shifted(psi: &PureState, phi: f64) -> Result<PureState> {
    let amps = psi.amps().map_with_location(|k, _, z| z * C64::from_polar(1.0, k as f64 * phi));
    Ok(PureState::new(amps, psi.dims().clone())?)
}

pub fn commit(args: &CommitArgs) -> Result<Verdict> {
    let (v, masker_input) = load_masker(&args.source)?;
    let psi = state_from_json(&read(&args.psi)?)
        .with_context(|| format!("invalid state in {}", args.psi.display()))?;
    let honest = commit_state(&psi, &v)?;

    let mut manifest = RunManifest::new("commit");
    manifest.inputs = vec![Input::file("psi", &args.psi), masker_input];
    manifest.config = json!({ "cheat_phase": args.cheat });
    manifest.output = args.out.clone();

    let Some(phi) = args.cheat else {
        let unveil_fidelity = honest.joint.fidelity(&commit_state(&honest.unveiled_state, &v)?.joint)?;
        eprintln!("honest commitment, unveiling fidelity {unveil_fidelity:.12}");
        emit(&manifest, json!({ "transcript": honest, "unveil_fidelity": unveil_fidelity, "cheat": null }))?;
        return Ok(Verdict::Positive);
    };

    let target = phase_shifted(&psi, phi)?;
    match cheat(&honest, &target, &v) {
        Ok((after, report)) => {
            eprintln!(
                "cheated: fidelity {:.12} to the target commitment (honest overlap {:.6}), \
                 sent marginals differ by {:.3e}",
                report.fidelity_to_target, report.fidelity_to_committed, report.marginal_distance
            );
            emit(
                &manifest,
                json!({
                    "transcript": honest,
                    "unveil_fidelity": report.fidelity_to_target,
                    "cheat": { "transcript": after, "report": report },
                }),
            )?;
            Ok(Verdict::Positive)
        }
        Err(Error::UnequalMarginals { distance }) => {
            eprintln!("cheat impossible: sent marginals differ by {distance:.6e} in trace distance");
            emit(
                &manifest,
                json!({
                    "transcript": honest,
                    "cheat": { "possible": false, "marginal_distance": distance },
                }),
            )?;
            Ok(Verdict::Negative)
        }
        Err(err) => Err(err.into()),
    }
}

pub fn probe(args: &ProbeArgs) -> Result<Verdict> {
    let (v, masker_input) = load_masker(&args.source)?;
    let report = probe_family(&v, args.samples, args.seed, args.tol, args.entropy_floor)?;
    eprintln!("{} of {} samples masked", report.masked_count, report.samples);

    let mut manifest = RunManifest::new("probe");
    manifest.inputs.push(masker_input);
    manifest.config = json!({
        "samples": args.samples,
        "tol": args.tol,
        "entropy_floor": args.entropy_floor,
        "csv": args.csv,
    });
    manifest.seed = Some(args.seed);
    manifest.output = args.out.clone();
    if let Some(path) = &args.csv {
        write_file(path, &report.to_csv(v.d_in()))?;
    }
    emit(&manifest, json!({ "report": report }))?;
    Ok(Verdict::Positive)
}
