use std::path::{Path, PathBuf};
use std::time::Instant;

use coamen::fusion::{
    coamenability_test, nu_operator, omega_mass, AxiomCheck, FusionRing, RingDescriptor,
};
use coamen::semidirect::{
    bicrossed_amenability_test, bicrossed_nu_operator, interval_criterion, nu_interval_operator,
    HalfLineGrid, PairClass, SymLatticePair,
};
use coamen::walk::{cayley_operator, kesten_test, BallTruncation, Element, GroupModel};
use coamen::{in_spectrum, truncation_sweep, AmenabilityVerdict, LanczosConfig, LinOp};

use crate::config::{
    BicrossedConfig, FusionConfig, ModelConfig, RingRule, RingSource, RunConfig, SemidirectConfig,
    SweepConfig, SweepModel, WalkConfig,
};
use crate::error::{CliError, CliResult};
use crate::report::{Details, Fingerprint, RunReport, ValidateReport};
use crate::SCHEMA;

fn version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// Dispatch `config` to its model and collect the report.
pub fn run(config: &RunConfig) -> CliResult<RunReport> {
    config.check()?;
    let start = Instant::now();
    let cfg = config.lanczos();
    let tol = config.tolerance;
    let (op, verdict, details) = match &config.model {
        ModelConfig::Fusion(f) => run_fusion(f, tol, &cfg)?,
        ModelConfig::Walk(w) => run_walk(w, tol, &cfg)?,
        ModelConfig::Semidirect(s) => run_semidirect(s, tol, &cfg)?,
        ModelConfig::Bicrossed(b) => run_bicrossed(b, tol, &cfg)?,
        ModelConfig::Sweep(s) => run_sweep(s, tol, &cfg)?,
    };
    Ok(RunReport {
        schema: SCHEMA,
        version: version(),
        config: config.clone(),
        fingerprint: Fingerprint::of(&op),
        spectral: verdict.spectral.clone(),
        verdict,
        details,
        wall_time_ms: config.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

type Outcome = (LinOp, AmenabilityVerdict, Details);

fn load_ring(source: &RingSource, trunc: usize) -> CliResult<FusionRing> {
    let desc = match source {
        RingSource::Rule {
            rule: RingRule::FreeSu2,
            n,
        } => RingDescriptor::free_su2(*n, trunc.saturating_sub(1).max(1)),
        RingSource::Descriptor { path } => read_descriptor(path)?,
    };
    Ok(FusionRing::load(&desc)?)
}

fn read_descriptor(path: &Path) -> CliResult<RingDescriptor> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(RingDescriptor::from_json(&text)?)
}

fn omega_refs(omega: &[String]) -> Vec<&str> {
    omega.iter().map(String::as_str).collect()
}

fn run_fusion(f: &FusionConfig, tol: f64, cfg: &LanczosConfig) -> CliResult<Outcome> {
    let ring = load_ring(&f.ring, f.trunc)?;
    let omega = omega_refs(&f.omega);
    let verdict = coamenability_test(&ring, &omega, f.trunc, tol, cfg)?;
    let op = nu_operator(&ring, &omega, f.trunc)?;
    let labels = op.size();
    let details = Details::Fusion {
        labels,
        omega_mass: omega_mass(&ring, &omega)?,
        exact_dims: (0..labels).all(|i| ring.int_dim(i).is_some()),
    };
    Ok((op, verdict, details))
}

fn parse_elements(group: &GroupModel, omega: &[String]) -> CliResult<Vec<Element>> {
    if omega.is_empty() {
        return Ok(group.generators());
    }
    Ok(omega
        .iter()
        .map(|s| group.parse_element(s))
        .collect::<coamen::Result<_>>()?)
}

fn walk_operator(group: &GroupModel, omega: &[Element], radius: usize) -> coamen::Result<LinOp> {
    let weights: Vec<(Element, f64)> = omega.iter().map(|s| (s.clone(), 1.0)).collect();
    cayley_operator(group, &weights, &BallTruncation::new(group, radius))
}

fn run_walk(w: &WalkConfig, tol: f64, cfg: &LanczosConfig) -> CliResult<Outcome> {
    let group = GroupModel::parse(&w.group)?;
    let omega = parse_elements(&group, &w.omega)?;
    let out = kesten_test(&group, &omega, &w.radii, tol, cfg)?;
    let op = walk_operator(
        &group,
        &omega,
        *w.radii.last().expect("radii checked non-empty"),
    )?;
    let details = Details::Walk {
        group: group.name(),
        normalized_radius: out.normalized_radius,
        trace: out.trace,
    };
    Ok((op, out.verdict, details))
}

fn run_semidirect(s: &SemidirectConfig, tol: f64, cfg: &LanczosConfig) -> CliResult<Outcome> {
    let grid = HalfLineGrid::new(s.grid.0, s.grid.1)?;
    let (a, b) = s.interval;
    let out = interval_criterion(&grid, a, b, &s.witness_m, tol, cfg)?;
    let iv = nu_interval_operator(&grid, a, b)?;
    let details = Details::Semidirect {
        snapped_interval: iv.snapped,
        quadrature_nodes: iv.nodes,
        witness_residuals: out.witness_residuals,
    };
    Ok((iv.op, out.verdict, details))
}

fn run_bicrossed(b: &BicrossedConfig, tol: f64, cfg: &LanczosConfig) -> CliResult<Outcome> {
    let out = bicrossed_amenability_test(&b.bounds, &b.omega, b.p, tol, cfg)?;
    let largest = *b.bounds.last().expect("bounds checked non-empty");
    let op = bicrossed_nu_operator(&SymLatticePair::new(largest)?, &b.omega, b.p)?;
    let details = Details::Bicrossed {
        target_dim: out.target_dim,
        target_measure: out.target_measure,
        points: out.points,
    };
    Ok((op, out.verdict, details))
}

fn run_sweep(s: &SweepConfig, tol: f64, cfg: &LanczosConfig) -> CliResult<Outcome> {
    let missing = || {
        CliError::Config(format!(
            "sweep model {:?} is missing its parameters",
            s.model
        ))
    };
    let largest = *s.sizes.last().expect("sizes checked non-empty");
    let (builder, target): (Box<dyn Fn(usize) -> coamen::Result<LinOp> + Sync>, f64) = match s.model
    {
        SweepModel::Fusion => {
            let (source, omega) = s.fusion.clone().ok_or_else(missing)?;
            let ring = load_ring(&source, largest)?;
            let target = omega_mass(&ring, &omega_refs(&omega))?;
            (
                Box::new(move |n| nu_operator(&ring, &omega_refs(&omega), n)),
                target,
            )
        }
        SweepModel::Walk => {
            let (spec, omega) = s.walk.clone().ok_or_else(missing)?;
            let group = GroupModel::parse(&spec)?;
            let omega = parse_elements(&group, &omega)?;
            let target = omega.len() as f64;
            (Box::new(move |r| walk_operator(&group, &omega, r)), target)
        }
        SweepModel::Semidirect => {
            let ((a, b), max_r) = s.semidirect.ok_or_else(missing)?;
            let iv =
                nu_interval_operator(&HalfLineGrid::new(max_r / largest as f64, max_r)?, a, b)?;
            (
                Box::new(move |n| {
                    let grid = HalfLineGrid::new(max_r / n as f64, max_r)?;
                    Ok(nu_interval_operator(&grid, a, b)?.op)
                }),
                iv.target,
            )
        }
        SweepModel::Bicrossed => {
            let (omega, p) = s.bicrossed.clone().ok_or_else(missing)?;
            let target = 2.0 * dedup(&omega).len() as f64;
            (
                Box::new(move |b| {
                    bicrossed_nu_operator(&SymLatticePair::new(b as i64)?, &omega, p)
                }),
                target,
            )
        }
    };
    let spectral = truncation_sweep(&builder, &s.sizes, tol, cfg)?;
    let op = builder(largest)?;
    let cert = in_spectrum(&op, target, tol, &[], cfg)?;
    let details = Details::Sweep {
        sizes: s.sizes.clone(),
        trace_converged: spectral.trace_converged,
    };
    Ok((
        op,
        AmenabilityVerdict::from_certificate(cert, spectral),
        details,
    ))
}

fn dedup(omega: &[PairClass]) -> Vec<PairClass> {
    let mut v = omega.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Axiom checks for a ring descriptor file or a group spec.
pub fn validate(descriptor: Option<&Path>, group: Option<&str>) -> CliResult<ValidateReport> {
    let (subject, checks) = match (descriptor, group) {
        (Some(path), _) => {
            let desc = read_descriptor(path)?;
            let ring = FusionRing::from_descriptor_unchecked(&desc)?;
            let checks = ring.validate().checks;
            (path.display().to_string(), checks)
        }
        (None, Some(spec)) => {
            let g = GroupModel::parse(spec)?;
            let samples = BallTruncation::new(&g, 3).elements().to_vec();
            let check = match g.check_action(&samples) {
                Ok(()) => AxiomCheck {
                    axiom: "group action".into(),
                    passed: true,
                    detail: None,
                },
                Err(coamen::Error::Validation { axiom, detail }) => AxiomCheck {
                    axiom: axiom.into(),
                    passed: false,
                    detail: Some(detail),
                },
                Err(e) => return Err(e.into()),
            };
            (g.name(), vec![check])
        }
        (None, None) => {
            return Err(CliError::Usage(
                "validate needs a descriptor path or --group".into(),
            ))
        }
    };
    Ok(ValidateReport {
        schema: SCHEMA,
        version: version(),
        subject,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.csv"))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Write the report to its output path (or stdout) plus any requested CSVs.
pub fn write_outputs(report: &RunReport) -> CliResult<()> {
    let json = report.to_json();
    match &report.config.output_path {
        Some(path) => {
            write_file(path, &json)?;
            if report.config.emit_csv {
                write_file(&sibling(path, "eigenvalues"), &report.eigenvalue_csv())?;
                write_file(&sibling(path, "trace"), &report.trace_csv())?;
            }
        }
        None => println!("{json}"),
    }
    Ok(())
}
