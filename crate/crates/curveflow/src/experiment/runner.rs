//! Executes a validated config: runs the solver(s), writes traces, frames,
//! events, and verdicts under `out/<name>/<hash>/`, and checks expectations.

use crate::analysis::classify::{classify, Outcome, Verdict};
use crate::analysis::detachment::{estimate_detachment, DetachmentOpts};
use crate::analysis::fattening::{fattening_verdict, FatteningOpts};
use crate::analysis::gradient::gradient_bound_audit;
use crate::error::{Error, Result};
use crate::experiment::config::{
    config_hash, validate, AnalysisKind, ExperimentConfig, SolverKind, TrackerMode,
};
use crate::geometry::io::write_curve;
use crate::geometry::profile::{make_initial_curve, Profile};
use crate::geometry::polyline::hausdorff_distance_sets;
use crate::levelset::evolve::{evolve as ls_evolve, LevelSetOpts, LsDtPolicy};
use crate::levelset::field::signed_distance_init;
use crate::levelset::grid::GridSpec;
use crate::trace::EvolutionTrace;
use crate::tracker::events::detect_events;
use crate::tracker::evolve::{evolve_free, evolve_neumann, DtPolicy, TrackerOpts};
use crate::tracker::marker::MarkerCurve;
use std::path::{Path, PathBuf};

/// Environment variable overriding the configured output root.
pub const OUTPUT_ROOT_ENV: &str = "CURVEFLOW_OUT";

#[derive(Debug, Clone, serde::Serialize)]
pub struct SubRunSummary {
    pub a: f64,
    pub solver: SolverKind,
    pub frames_written: usize,
    pub frame_times: Vec<f64>,
    pub verdicts: Vec<Verdict>,
    pub events: crate::trace::EventLog,
    pub cross_validation_max_hausdorff: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RunSummary {
    pub name: String,
    pub config_hash: String,
    pub wall_time_s: f64,
    pub out_dir: PathBuf,
    pub sub_runs: Vec<SubRunSummary>,
    pub expectations_pass: bool,
    pub expectation_notes: Vec<String>,
}

pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    let root = std::env::var(OUTPUT_ROOT_ENV).unwrap_or_else(|_| cfg.output_dir.clone());
    Path::new(&root).join(&cfg.name).join(config_hash(cfg))
}

pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let diags = validate(cfg);
    if !diags.is_empty() {
        return Err(Error::Config(diags));
    }
    let started = std::time::Instant::now();
    let out_root = output_dir(cfg);
    std::fs::create_dir_all(&out_root)?;

    let mut sub_runs = Vec::new();
    for &a in &cfg.a_values {
        let sub_dir = if cfg.a_values.len() == 1 {
            out_root.clone()
        } else {
            out_root.join(format!("A_{a}"))
        };
        std::fs::create_dir_all(&sub_dir)?;
        sub_runs.push(run_one(cfg, a, &sub_dir));
    }
    let sub_runs: Vec<SubRunSummary> = sub_runs
        .into_iter()
        .map(|r| match r {
            Ok(s) => s,
            Err((a, e)) => SubRunSummary {
                a,
                solver: cfg.solver,
                frames_written: 0,
                frame_times: Vec::new(),
                verdicts: Vec::new(),
                events: Default::default(),
                cross_validation_max_hausdorff: None,
                error: Some(e.to_string()),
            },
        })
        .collect();

    let (pass, notes) = check_expectations(cfg, &sub_runs);
    let summary = RunSummary {
        name: cfg.name.clone(),
        config_hash: config_hash(cfg),
        wall_time_s: started.elapsed().as_secs_f64(),
        out_dir: out_root.clone(),
        sub_runs,
        expectations_pass: pass,
        expectation_notes: notes,
    };
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    std::fs::write(out_root.join("summary.json"), json)?;
    Ok(summary)
}

type SubResult = std::result::Result<SubRunSummary, (f64, Error)>;

fn run_one(cfg: &ExperimentConfig, a: f64, dir: &Path) -> SubResult {
    let wrap = |e: Error| (a, e);
    let profile = make_initial_curve(&cfg.initial).map_err(wrap)?;

    let mut traces: Vec<(&'static str, EvolutionTrace)> = Vec::new();
    match cfg.solver {
        SolverKind::Fronttrack => {
            traces.push(("tracker", run_tracker(cfg, a, &profile).map_err(wrap)?));
        }
        SolverKind::Levelset => {
            traces.push(("levelset", run_levelset(cfg, a, &profile).map_err(wrap)?));
        }
        SolverKind::GraphQ => {
            let (tm, tp) = (cfg.theta_minus.unwrap(), cfg.theta_plus.unwrap());
            let opts = crate::graph::free_boundary::FreeBoundaryOpts {
                nodes: cfg.graph_nodes,
                frame_dt: cfg.frame_dt,
                ..crate::graph::free_boundary::FreeBoundaryOpts::with_frames(cfg.frame_dt)
            };
            traces.push((
                "graph",
                crate::graph::free_boundary::solve_free_boundary(
                    &profile, tm, tp, a, cfg.t_end, &opts,
                )
                .map_err(wrap)?,
            ));
        }
        SolverKind::Both => {
            traces.push(("tracker", run_tracker(cfg, a, &profile).map_err(wrap)?));
            traces.push(("levelset", run_levelset(cfg, a, &profile).map_err(wrap)?));
        }
    }

    // Cross-validation for `both`: framewise Hausdorff on common times.
    let cross = if traces.len() == 2 {
        Some(cross_validate(&traces[0].1, &traces[1].1).map_err(wrap)?)
    } else {
        None
    };

    // Outputs from the primary trace.
    let primary = &traces[0].1;
    primary.write_csv(&dir.join("trace.csv")).map_err(wrap)?;
    let frames_dir = dir.join("frames");
    std::fs::create_dir_all(&frames_dir).map_err(|e| wrap(e.into()))?;
    let mut written = 0usize;
    for (k, frame) in primary.frames.iter().enumerate() {
        if k % cfg.frame_stride.max(1) != 0 {
            continue;
        }
        for (ci, curve) in frame.curves.iter().enumerate() {
            let name = if frame.curves.len() == 1 {
                format!("frame_{k:05}.csv")
            } else {
                format!("frame_{k:05}_{ci}.csv")
            };
            write_curve(&frames_dir.join(name), curve).map_err(wrap)?;
        }
        written += 1;
    }
    for (label, tr) in traces.iter().skip(1) {
        tr.write_csv(&dir.join(format!("trace_{label}.csv")))
            .map_err(wrap)?;
    }

    let events = detect_events(primary);
    events.write_jsonl(&dir.join("events.jsonl")).map_err(wrap)?;

    // Analyses.
    let mut verdicts: Vec<Verdict> = Vec::new();
    for analysis in &cfg.analyses {
        match analysis {
            AnalysisKind::Classify => {
                let mut v = classify(primary, a);
                v.config_hash = Some(config_hash(cfg));
                verdicts.push(v);
            }
            AnalysisKind::Events => {} // always written above
            AnalysisKind::Fattening => {
                let opts = FatteningOpts {
                    grid_n: cfg.grid_n,
                    ..FatteningOpts::default()
                };
                let mut v = fattening_verdict(&profile, a, &opts).map_err(wrap)?;
                v.config_hash = Some(config_hash(cfg));
                verdicts.push(v);
            }
            AnalysisKind::AStar => {
                let est = estimate_detachment(
                    &profile,
                    a,
                    &DetachmentOpts {
                        spacing: cfg.tracker_spacing,
                        ..DetachmentOpts::default()
                    },
                )
                .map_err(wrap)?;
                let mut v = Verdict::new(Outcome::Undetermined)
                    .with_metric("a_star_slope", est.slope);
                v.sub_reports.detachment = Some(est);
                v.config_hash = Some(config_hash(cfg));
                verdicts.push(v);
            }
            AnalysisKind::GradientAudit { delta } => {
                let rep = gradient_bound_audit(primary, a, *delta).map_err(wrap)?;
                let json = serde_json::to_string_pretty(&rep)
                    .map_err(|e| wrap(Error::InvalidInput(e.to_string())))?;
                std::fs::write(dir.join("gradient_audit.json"), json)
                    .map_err(|e| wrap(e.into()))?;
            }
            AnalysisKind::IntersectionAudit { other } => {
                let other_cfg =
                    crate::experiment::config::parse_file(Path::new(other)).map_err(wrap)?;
                let other_profile = make_initial_curve(&other_cfg.initial).map_err(wrap)?;
                let other_trace = match other_cfg.solver {
                    SolverKind::GraphQ => {
                        let (tm, tp) =
                            (other_cfg.theta_minus.unwrap(), other_cfg.theta_plus.unwrap());
                        let opts = crate::graph::free_boundary::FreeBoundaryOpts {
                            nodes: other_cfg.graph_nodes,
                            frame_dt: cfg.frame_dt,
                            ..crate::graph::free_boundary::FreeBoundaryOpts::with_frames(
                                cfg.frame_dt,
                            )
                        };
                        crate::graph::free_boundary::solve_free_boundary(
                            &other_profile, tm, tp, a, cfg.t_end, &opts,
                        )
                        .map_err(wrap)?
                    }
                    _ => run_tracker(&other_cfg, a, &other_profile).map_err(wrap)?,
                };
                let mode = if matches!(other_cfg.solver, SolverKind::GraphQ)
                    != matches!(cfg.solver, SolverKind::GraphQ)
                {
                    crate::analysis::audit::AuditMode::StrictNonincreasing
                } else {
                    crate::analysis::audit::AuditMode::NonincreasingWhilePositive
                };
                let outcome =
                    crate::analysis::audit::monotonicity_audit(primary, &other_trace, mode)
                        .map_err(wrap)?;
                let report = serde_json::json!({
                    "mode": format!("{mode:?}"),
                    "series": outcome.series,
                    "violations": outcome.violations.len(),
                });
                std::fs::write(
                    dir.join("intersection_audit.json"),
                    serde_json::to_string_pretty(&report).unwrap(),
                )
                .map_err(|e| wrap(e.into()))?;
            }
        }
    }
    if !verdicts.is_empty() {
        let json = serde_json::to_string_pretty(&verdicts)
            .map_err(|e| wrap(Error::InvalidInput(e.to_string())))?;
        std::fs::write(dir.join("verdict.json"), json).map_err(|e| wrap(e.into()))?;
    }

    Ok(SubRunSummary {
        a,
        solver: cfg.solver,
        frames_written: written,
        frame_times: primary.times(),
        verdicts,
        events,
        cross_validation_max_hausdorff: cross,
        error: None,
    })
}

fn tracker_opts(cfg: &ExperimentConfig) -> TrackerOpts {
    TrackerOpts {
        dt_policy: match cfg.dt_fixed {
            Some(dt) => DtPolicy::Fixed(dt),
            None => DtPolicy::CflFraction(cfg.cfl_factor),
        },
        frame_dt: cfg.frame_dt,
        strict: true,
    }
}

fn run_tracker(cfg: &ExperimentConfig, a: f64, profile: &Profile) -> Result<EvolutionTrace> {
    let opts = tracker_opts(cfg);
    match cfg.tracker_mode {
        TrackerMode::Neumann => {
            evolve_neumann(profile, cfg.tracker_spacing, a, cfg.t_end, &opts)
        }
        TrackerMode::Free => {
            let lobe = profile.to_closed_curve()?;
            let mc = MarkerCurve::from_curve(lobe, cfg.tracker_spacing)?;
            evolve_free(&mc, a, cfg.t_end, &opts)
        }
    }
}

/// Level-set runs evolve the even extension when the profile touches the
/// axis (the singular orientation); otherwise the lobe itself.
fn run_levelset(cfg: &ExperimentConfig, a: f64, profile: &Profile) -> Result<EvolutionTrace> {
    let curve = if profile.a.abs() < 1e-12 {
        profile.even_extend()?.to_closed_curve()?
    } else {
        profile.to_closed_curve()?
    };
    let grid = match cfg.grid_extent {
        Some((x0, x1, y0, y1)) => GridSpec::new(x0, x1, y0, y1, cfg.grid_n, cfg.grid_n)?,
        None => {
            let (lo, hi) = curve.bounding_box();
            // Room for growth: expanding runs need space up to ~A t_end.
            let pad = cfg.grid_pad.max(0.2 * (hi.x - lo.x));
            GridSpec::square(lo.x - pad, hi.x + pad, lo.y - pad, hi.y + pad, cfg.grid_n)?
        }
    };
    let dense = curve.resample(((curve.arc_length() / (0.75 * grid.dx())).ceil() as usize).max(64))?;
    let field = signed_distance_init(&dense, &grid)?;
    let opts = LevelSetOpts {
        dt_policy: match cfg.dt_fixed {
            Some(dt) => LsDtPolicy::Fixed(dt),
            None => LsDtPolicy::Adaptive,
        },
        frame_dt: cfg.frame_dt,
        reinit_every: 25,
        reinit_iters: 20,
    };
    let (trace, _) = ls_evolve(&field, a, cfg.t_end, &opts)?;
    Ok(trace)
}

/// Max framewise Hausdorff distance over common frame times.
pub fn cross_validate(a: &EvolutionTrace, b: &EvolutionTrace) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut any = false;
    for fa in &a.frames {
        if fa.curves.is_empty() {
            continue;
        }
        if let Some(fb) = b
            .frames
            .iter()
            .find(|fb| (fb.t - fa.t).abs() < 1e-9 * (1.0 + fa.t) && !fb.curves.is_empty())
        {
            worst = worst.max(hausdorff_distance_sets(&fa.curves, &fb.curves)?);
            any = true;
        }
    }
    if !any {
        return Err(Error::TraceMismatch("no common frame times".into()));
    }
    Ok(worst)
}

fn check_expectations(cfg: &ExperimentConfig, subs: &[SubRunSummary]) -> (bool, Vec<String>) {
    let mut pass = true;
    let mut notes = Vec::new();
    for sub in subs {
        if let Some(e) = &sub.error {
            pass = false;
            notes.push(format!("A={}: run failed: {e}", sub.a));
            continue;
        }
        if let Some(expected) = &cfg.expect_outcome {
            let expected_list: Vec<&str> = expected.split(',').map(str::trim).collect();
            let idx = cfg.a_values.iter().position(|&x| x == sub.a).unwrap_or(0);
            let want = expected_list.get(idx).copied().unwrap_or(expected_list[0]);
            let got = sub
                .verdicts
                .iter()
                .map(|v| format!("{:?}", v.outcome))
                .find(|o| o == want);
            if got.is_none() {
                pass = false;
                notes.push(format!(
                    "A={}: expected outcome {want}, got {:?}",
                    sub.a,
                    sub.verdicts.iter().map(|v| v.outcome).collect::<Vec<_>>()
                ));
            } else {
                notes.push(format!("A={}: outcome {want} as expected", sub.a));
            }
        }
        if let Some(t_exp) = cfg.expect_extinction {
            let t_got = sub
                .events
                .first(crate::trace::EventKind::Extinction)
                .map(|e| e.t);
            match t_got {
                Some(t) if ((t - t_exp) / t_exp).abs() <= cfg.expect_tol => {
                    notes.push(format!("A={}: extinction {t:.6} within tolerance", sub.a));
                }
                Some(t) => {
                    pass = false;
                    notes.push(format!(
                        "A={}: extinction {t:.6} vs expected {t_exp:.6} (tol {})",
                        sub.a, cfg.expect_tol
                    ));
                }
                None => {
                    pass = false;
                    notes.push(format!("A={}: no extinction event recorded", sub.a));
                }
            }
        }
    }
    (pass, notes)
}
