//! The pipeline stages behind each subcommand.

use std::path::{Path, PathBuf};
use std::time::Instant;

use fif_core::analysis::{
    box_count, box_count_shifted, check_dimension_bound, default_eps_list, default_scales, estimate_box_dimension,
    estimate_holder, holder_audit, BoxCountTable, Samples as BoxSamples,
};
use fif_core::attractor::{chaos_game, hausdorff, iterate_hutchinson, PointCloud3};
use fif_core::fixed_point::{iterate_to_fixed_point, FixedPoint};
use fif_core::interp::{compute_invariant_rect, verify_edelstein, HiddenIfs, IfsMaps};

use crate::config::{AttractorMode, RunConfig};
use crate::error::CliError;
use crate::output::{self, Samples, SAMPLES_CSV};
use crate::report::*;
use crate::svg::{self, Series};

const SVG_MAX_POINTS: usize = 4000;
const SVG_MAX_DOTS: usize = 20_000;
const GRAPH_RATIO_LIMIT: f64 = 5.0;

/// Where a run writes, and with what settings.
#[derive(Debug, Clone)]
pub struct Run {
    pub cfg: RunConfig,
    pub out: PathBuf,
}

impl Run {
    /// `out` and `seed` override the config file.
    pub fn new(mut cfg: RunConfig, out: Option<PathBuf>, seed: Option<u64>) -> Result<Self, CliError> {
        if let Some(seed) = seed {
            cfg.seed = seed;
        }
        let out = out.unwrap_or_else(|| cfg.output.dir.clone());
        std::fs::create_dir_all(&out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
        Ok(Run { cfg, out })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn svg(&self, name: &str, doc: impl FnOnce() -> String) -> Result<(), CliError> {
        if self.cfg.output.svg {
            output::write_text(&self.path(name), &doc())?;
        }
        Ok(())
    }
}

pub struct Verified {
    pub ifs: HiddenIfs,
    pub summary: VerifySummary,
}

/// Checks every hypothesis of the construction and writes `verify.json`.
pub fn verify(run: &Run) -> Result<Verified, CliError> {
    let start = Instant::now();
    let cfg = &run.cfg;
    let data = cfg.dataset()?;
    let params = cfg.interval_params(data.intervals())?;
    let maps = IfsMaps::assemble(data, &params)?;
    maps.check_contractions()?;
    let norms = maps.norm_report();
    norms.check()?;
    if !(cfg.verify.margin_growth > 1.0) {
        return Err(CliError::Config(format!(
            "verify.margin_growth must exceed 1, got {}",
            cfg.verify.margin_growth
        )));
    }
    let search = compute_invariant_rect(&maps, cfg.verify.margin_growth)?;
    let edel = verify_edelstein(&maps, &search.rect, cfg.verify.edelstein_pairs, cfg.seed);
    let witness = edel.witness.map(|w| EdelsteinWitnessOut {
        interval: w.interval + 1,
        t: w.t,
        x: w.x,
        y: w.y,
        ratio: w.ratio,
    });
    if !edel.passes() {
        let w = witness.expect("a failing report has a witness");
        return Err(CliError::Edelstein(format!(
            "sampled contraction ratio {} >= 1 on interval {} at t = {}, x = {:?}, y = {:?}",
            edel.max_ratio, w.interval, w.t, w.x, w.y
        )));
    }
    let r = search.rect;
    let summary = VerifySummary {
        intervals: maps.intervals(),
        column_sums: norms.column_sums.clone(),
        contractions: params.iter().map(|p| [p.s.name(), p.r.name()]).collect(),
        rect: [r.v_lo, r.v_hi, r.w_lo, r.w_hi],
        rect_attempts: search.attempts,
        edelstein_pairs: edel.pairs,
        edelstein_max_ratio: edel.max_ratio,
        edelstein_witness: witness,
        seed: cfg.seed,
        seconds: start.elapsed().as_secs_f64(),
    };
    let ifs = HiddenIfs::new(maps, r)?;
    output::write_json(&run.path(VERIFY_JSON), &summary)?;
    Ok(Verified { ifs, summary })
}

pub struct Solved {
    pub fp: FixedPoint,
    pub summary: SolveSummary,
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    Some(xs[xs.len() / 2])
}

/// Fixed-point iteration; writes `samples.csv`, `trace.csv`, `solve.json`.
pub fn solve(run: &Run, ifs: &HiddenIfs) -> Result<Solved, CliError> {
    let start = Instant::now();
    let rb = run.cfg.rb_config();
    let fp = match iterate_to_fixed_point(ifs, &rb) {
        Ok(fp) => fp,
        Err(fif_core::Error::NotConverged {
            iterations,
            last_change,
            trace,
        }) => {
            output::write_trace(&run.path("trace.csv"), &trace)?;
            return Err(CliError::Convergence(format!(
                "no convergence in {iterations} iterations (last change {last_change:e}); trace in trace.csv"
            )));
        }
        Err(e) => return Err(e.into()),
    };
    output::write_samples(&run.path(SAMPLES_CSV), &fp.f)?;
    output::write_trace(&run.path("trace.csv"), &fp.diagnostics.changes)?;
    let d = &fp.diagnostics;
    let summary = SolveSummary {
        grid_points: fp.f.grid().len(),
        per_interval: rb.per_interval,
        max_spacing: fp.f.grid().max_spacing(),
        tol: rb.tol,
        iterations: d.iterations(),
        final_change: d.changes.last().copied().unwrap_or(0.0),
        residual: d.residual,
        node_residual: d.node_residual,
        ratio_estimate: median(d.ratios()),
        seconds: start.elapsed().as_secs_f64(),
    };
    output::write_json(&run.path(SOLVE_JSON), &summary)?;

    let t = fp.f.grid().points();
    let f1 = fp.f.component(0);
    let f2 = fp.f.component(1);
    run.svg("graph.svg", || {
        svg::line_plot(
            "interpolant",
            "t",
            "f",
            &[
                Series { label: "f1", x: t, y: &f1 },
                Series { label: "f2", x: t, y: &f2 },
            ],
            SVG_MAX_POINTS,
        )
    })?;
    let ks: Vec<f64> = (1..=d.changes.len()).map(|k| k as f64).collect();
    let log_changes: Vec<f64> = d.changes.iter().map(|c| c.max(f64::MIN_POSITIVE).log10()).collect();
    run.svg("convergence.svg", || {
        svg::line_plot(
            "convergence",
            "iteration",
            "log10 change",
            &[Series { label: "sup change", x: &ks, y: &log_changes }],
            SVG_MAX_POINTS,
        )
    })?;
    Ok(Solved { fp, summary })
}

fn graph_cloud(t: &[f64], f1: &[f64], f2: &[f64]) -> PointCloud3 {
    PointCloud3::new(t.iter().zip(f1).zip(f2).map(|((&t, &a), &b)| [t, a, b]).collect())
}

fn max_spacing(t: &[f64]) -> f64 {
    t.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Hutchinson and chaos-game clouds; compares with `graph` when given.
pub fn attractor(run: &Run, ifs: &HiddenIfs, graph: Option<&Samples>) -> Result<AttractorSummary, CliError> {
    let start = Instant::now();
    let a = &run.cfg.attractor;
    let mut hut = None;
    let mut hut_summary = None;
    if matches!(a.mode, AttractorMode::Hutchinson | AttractorMode::Both) {
        let h = iterate_hutchinson(ifs, a.depth, a.cap);
        output::write_cloud(&run.path("hutchinson.csv"), &h.cloud.points)?;
        hut_summary = Some(HutchinsonSummary {
            depth: a.depth,
            cap: a.cap,
            points: h.cloud.len(),
            final_displacement: h.final_displacement(),
            displacements: h.displacements.clone(),
        });
        hut = Some(h);
    }
    let mut chaos = None;
    let mut chaos_summary = None;
    if matches!(a.mode, AttractorMode::Chaos | AttractorMode::Both) {
        let steps = match a.chaos_points {
            0 => hut.as_ref().map_or(a.cap, |h| h.cloud.len()) + a.burn_in,
            n => n,
        };
        let c = chaos_game(ifs, steps, a.burn_in, run.cfg.seed)?;
        output::write_cloud(&run.path("chaos.csv"), &c.points)?;
        chaos_summary = Some(ChaosSummary {
            steps,
            burn_in: a.burn_in,
            points: c.len(),
            seed: run.cfg.seed,
        });
        chaos = Some(c);
    }
    let chaos_vs_hutchinson = match (&hut, &chaos) {
        (Some(h), Some(c)) => Some(hausdorff(c, &h.cloud)?),
        _ => None,
    };
    let graph_vs_hutchinson = match (&hut, graph) {
        (Some(h), Some(g)) => {
            let d = hausdorff(&graph_cloud(&g.t, &g.f1, &g.f2), &h.cloud)?;
            let scale = max_spacing(&g.t).max(h.final_displacement());
            let ratio = d / scale;
            Some(GraphComparison {
                hausdorff: d,
                scale,
                ratio,
                passes: ratio <= GRAPH_RATIO_LIMIT,
            })
        }
        _ => None,
    };
    let summary = AttractorSummary {
        hutchinson: hut_summary,
        chaos: chaos_summary,
        chaos_vs_hutchinson,
        graph_vs_hutchinson,
        seconds: start.elapsed().as_secs_f64(),
    };
    output::write_json(&run.path(ATTRACTOR_JSON), &summary)?;

    if run.cfg.output.svg {
        let mut clouds: Vec<(&str, &PointCloud3)> = Vec::new();
        if let Some(h) = &hut {
            clouds.push(("hutchinson", &h.cloud));
        }
        if let Some(c) = &chaos {
            clouds.push(("chaos game", c));
        }
        for (axis, name) in [(1, "attractor_v.svg"), (2, "attractor_w.svg")] {
            let cols: Vec<(Vec<f64>, Vec<f64>)> = clouds
                .iter()
                .map(|(_, c)| (c.points.iter().map(|p| p[0]).collect(), c.points.iter().map(|p| p[axis]).collect()))
                .collect();
            let series: Vec<Series<'_>> = clouds
                .iter()
                .zip(&cols)
                .map(|((label, _), (x, y))| Series { label, x, y })
                .collect();
            let y_label = if axis == 1 { "v" } else { "w" };
            run.svg(name, || svg::scatter("attractor", "t", y_label, &series, SVG_MAX_DOTS))?;
        }
    }
    Ok(summary)
}

fn analyze_component(
    run: &Run,
    name: &'static str,
    t: &[f64],
    y: &[f64],
) -> Result<(ComponentAnalysis, BoxCountTable), CliError> {
    let a = &run.cfg.analysis;
    let span = t[t.len() - 1] - t[0];
    let eps = a.eps.clone().unwrap_or_else(|| default_eps_list(span, 3, 9));
    let scales = a.scales.clone().unwrap_or_else(|| default_scales(span, 3, 9));
    let samples = BoxSamples::Graph { t, y };
    let table = box_count(samples, &eps)?;
    let fit = estimate_box_dimension(&table)?;
    let shifted = estimate_box_dimension(&box_count_shifted(samples, &eps, a.mesh_shift)?)?;
    let est = estimate_holder(t, y, &scales)?;
    let audit = holder_audit(t, y, &est, a.audit_pairs, run.cfg.seed);
    let bound = check_dimension_bound(fit.dim, est.alpha_hat, a.slack);
    let out = ComponentAnalysis {
        component: name,
        eps: table.rows.iter().map(|r| r.eps).collect(),
        counts: table.rows.iter().map(|r| r.count).collect(),
        box_dim: fit.dim,
        box_intercept: fit.intercept,
        box_r2: fit.r2,
        local_slopes: fit.local_slopes,
        degenerate: fit.degenerate,
        shifted_box_dim: shifted.dim,
        mesh_shift: a.mesh_shift,
        alpha_hat: est.alpha_hat,
        k_hat: est.k_hat,
        holder_scales: est.scales,
        oscillations: est.oscillations,
        holder_r2: est.r2,
        holder_rms_residual: est.rms_residual,
        holder_non_monotone: est.non_monotone,
        audit_pairs: audit.pairs,
        audit_violations: audit.violations,
        audit_max_ratio: audit.max_ratio,
        bound: bound.bound,
        bound_margin: bound.margin,
        bound_passes: bound.passes,
    };
    Ok((out, table))
}

/// `N(eps) = round((1/eps)^d)`, fitted like measured counts.
pub fn synthetic_table(dimension: f64, eps: &[f64]) -> BoxCountTable {
    BoxCountTable::from_rows(eps.iter().map(|&e| (e, (1.0 / e).powf(dimension).round().max(1.0) as u64)))
}

/// Dimension and smoothness estimates for both components of `samples`.
/// Fails with a `check` error when the dimension bound does not hold.
pub fn analyze(run: &Run, samples: Option<&Samples>) -> Result<AnalysisSummary, CliError> {
    let start = Instant::now();
    let a = &run.cfg.analysis;
    if let Some(d) = a.synthetic_dimension {
        let eps = a.eps.clone().unwrap_or_else(|| default_eps_list(1.0, 3, 9));
        let table = synthetic_table(d, &eps);
        let fit = estimate_box_dimension(&table)?;
        output::write_boxcount(&run.path("boxcount.csv"), &[("synthetic", &table)])?;
        let summary = AnalysisSummary {
            slack: a.slack,
            components: Vec::new(),
            synthetic: Some(SyntheticSummary {
                dimension: d,
                eps,
                counts: table.rows.iter().map(|r| r.count).collect(),
                fitted: fit.dim,
                error: (fit.dim - d).abs(),
            }),
            passes: true,
            seconds: start.elapsed().as_secs_f64(),
        };
        output::write_json(&run.path(ANALYSIS_JSON), &summary)?;
        return Ok(summary);
    }
    let loaded;
    let s = match samples {
        Some(s) => s,
        None => {
            loaded = output::read_samples(&run.path(SAMPLES_CSV))?;
            &loaded
        }
    };
    let (c1, t1) = analyze_component(run, "f1", &s.t, &s.f1)?;
    let (c2, t2) = analyze_component(run, "f2", &s.t, &s.f2)?;
    output::write_boxcount(&run.path("boxcount.csv"), &[("f1", &t1), ("f2", &t2)])?;
    output::write_table(
        &run.path("holder.csv"),
        ["scale", "osc_f1", "osc_f2"],
        c1.holder_scales
            .iter()
            .zip(c1.oscillations.iter().zip(&c2.oscillations))
            .map(|(&h, (&o1, &o2))| [h, o1, o2]),
    )?;
    run.svg("boxcount.svg", || {
        let inv: Vec<Vec<f64>> = [&c1, &c2].iter().map(|c| c.eps.iter().map(|e| 1.0 / e).collect()).collect();
        let n: Vec<Vec<f64>> = [&c1, &c2].iter().map(|c| c.counts.iter().map(|&k| k as f64).collect()).collect();
        svg::loglog(
            "box counting",
            "ln(1/eps)",
            "ln N(eps)",
            &[
                (Series { label: "f1", x: &inv[0], y: &n[0] }, c1.box_dim, c1.box_intercept),
                (Series { label: "f2", x: &inv[1], y: &n[1] }, c2.box_dim, c2.box_intercept),
            ],
        )
    })?;
    let passes = c1.bound_passes && c2.bound_passes;
    let summary = AnalysisSummary {
        slack: a.slack,
        components: vec![c1, c2],
        synthetic: None,
        passes,
        seconds: start.elapsed().as_secs_f64(),
    };
    output::write_json(&run.path(ANALYSIS_JSON), &summary)?;
    if !passes {
        let c = summary.components.iter().find(|c| !c.bound_passes).expect("a failing component");
        return Err(CliError::Check(format!(
            "dimension bound violated for {}: dim {} > 2 - alpha + slack = {}",
            c.component, c.box_dim, c.bound
        )));
    }
    Ok(summary)
}

fn samples_of(fp: &FixedPoint) -> Samples {
    Samples {
        t: fp.f.grid().points().to_vec(),
        f1: fp.f.component(0),
        f2: fp.f.component(1),
    }
}

pub fn cmd_verify(run: &Run) -> Result<(), CliError> {
    let v = verify(run)?;
    write_report(&run.out, "verify")?;
    println!(
        "verify: ok ({} intervals, edelstein ratio {:.6} over {} pairs, rect attempts {})",
        v.summary.intervals, v.summary.edelstein_max_ratio, v.summary.edelstein_pairs, v.summary.rect_attempts
    );
    Ok(())
}

pub fn cmd_solve(run: &Run) -> Result<(), CliError> {
    let v = verify(run)?;
    let s = solve(run, &v.ifs)?;
    write_report(&run.out, "solve")?;
    print_solve(&s.summary);
    Ok(())
}

pub fn cmd_attractor(run: &Run) -> Result<(), CliError> {
    let v = verify(run)?;
    let path = run.path(SAMPLES_CSV);
    let graph = if path.exists() { Some(output::read_samples(&path)?) } else { None };
    let a = attractor(run, &v.ifs, graph.as_ref())?;
    write_report(&run.out, "attractor")?;
    print_attractor(&a);
    Ok(())
}

pub fn cmd_analyze(run: &Run) -> Result<(), CliError> {
    let result = analyze(run, None);
    write_report(&run.out, "analyze")?;
    print_analysis(&result?);
    Ok(())
}

pub fn cmd_all(run: &Run) -> Result<(), CliError> {
    let v = verify(run)?;
    let s = solve(run, &v.ifs)?;
    print_solve(&s.summary);
    let graph = samples_of(&s.fp);
    let a = attractor(run, &v.ifs, Some(&graph))?;
    print_attractor(&a);
    let result = analyze(run, Some(&graph));
    write_report(&run.out, "all")?;
    print_analysis(&result?);
    Ok(())
}

fn print_solve(s: &SolveSummary) {
    println!(
        "solve: {} iterations, final change {:e}, node residual {:e}",
        s.iterations, s.final_change, s.node_residual
    );
}

fn print_attractor(a: &AttractorSummary) {
    if let Some(h) = &a.hutchinson {
        println!("attractor: hutchinson {} points, displacement {:e}", h.points, h.final_displacement);
    }
    if let Some(c) = &a.chaos {
        println!("attractor: chaos game {} points", c.points);
    }
    if let Some(g) = &a.graph_vs_hutchinson {
        println!("attractor: graph distance {:e} ({:.3} x scale)", g.hausdorff, g.ratio);
    }
}

fn print_analysis(s: &AnalysisSummary) {
    if let Some(syn) = &s.synthetic {
        println!("analyze: synthetic d = {}, fitted {:.6}", syn.dimension, syn.fitted);
    }
    for c in &s.components {
        println!(
            "analyze: {} box dim {:.4}, alpha {:.4}, bound {:.4} ({})",
            c.component,
            c.box_dim,
            c.alpha_hat,
            c.bound,
            if c.bound_passes { "ok" } else { "violated" }
        );
    }
}

/// Loads `path` and builds a [`Run`].
pub fn load_run(path: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<Run, CliError> {
    Run::new(RunConfig::load(path)?, out, seed)
}
