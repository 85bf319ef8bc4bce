//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fif_cli::commands::{self, Run};
use fif_cli::output::Samples;
use fif_cli::RunConfig;
use fif_core::analysis::{box_count, classic_fif_oracle, Samples as BoxSamples};
use fif_core::fixed_point::{apply_rb, initial_guess, Grid, SampledVectorFunction};
use fif_core::interp::HiddenIfs;

const SHIPPED: [&str; 4] = ["canonical", "degenerate", "classic", "rough"];

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.toml"))
}

fn run_for(name: &str, dir: &Path) -> Run {
    let cfg = RunConfig::load(&config_path(name)).expect("shipped config parses");
    Run::new(cfg, Some(dir.join(name)), None).unwrap()
}

fn samples(fp: &fif_core::fixed_point::FixedPoint) -> Samples {
    Samples {
        t: fp.f.grid().points().to_vec(),
        f1: fp.f.component(0),
        f2: fp.f.component(1),
    }
}

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn node_residual(dir: &Path) -> Outcome {
    let run = run_for("canonical", dir);
    let v = commands::verify(&run).map_err(|e| e.to_string())?;
    let s = commands::solve(&run, &v.ifs).map_err(|e| e.to_string())?;
    let r = s.summary.node_residual;
    check(r < 1e-9, format!("node residual {r:e} < 1e-9"))
}

fn random_ce(ifs: &HiddenIfs, grid: &Arc<Grid>, rng: &mut ChaCha8Rng) -> SampledVectorFunction {
    let nodes = 9;
    let r = ifs.rect();
    let (lo, hi) = ifs.data().domain();
    let [_, v0, w0] = ifs.data().first();
    let [_, vn, wn] = ifs.data().last();
    let mut ys: Vec<[f64; 2]> = (0..=nodes)
        .map(|_| [rng.random_range(r.v_lo..=r.v_hi), rng.random_range(r.w_lo..=r.w_hi)])
        .collect();
    ys[0] = [v0, w0];
    ys[nodes] = [vn, wn];
    SampledVectorFunction::from_fn(grid.clone(), |t| {
        let x = (t - lo) / (hi - lo) * nodes as f64;
        let i = (x.floor() as usize).min(nodes - 1);
        let s = x - i as f64;
        [
            ys[i][0] + s * (ys[i + 1][0] - ys[i][0]),
            ys[i][1] + s * (ys[i + 1][1] - ys[i][1]),
        ]
    })
}

fn operator_contracts(dir: &Path) -> Outcome {
    let run = run_for("canonical", dir);
    let ifs = commands::verify(&run).map_err(|e| e.to_string())?.ifs;
    let grid = Arc::new(Grid::uniform(ifs.data(), 1024).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(run.cfg.seed);
    let mut worst_margin = f64::INFINITY;
    for _ in 0..100 {
        let h = random_ce(&ifs, &grid, &mut rng);
        let k = random_ce(&ifs, &grid, &mut rng);
        let before = h.sup_distance(&k);
        let after = apply_rb(&ifs, &h)
            .map_err(|e| e.to_string())?
            .sup_distance(&apply_rb(&ifs, &k).map_err(|e| e.to_string())?);
        worst_margin = worst_margin.min(before - after);
    }
    check(
        worst_margin > 1e-12,
        format!("100 pairs, smallest d(h,k) - d(Rh,Rk) = {worst_margin:e} > 1e-12"),
    )
}

fn graph_is_attractor(dir: &Path) -> Outcome {
    let run = run_for("canonical", dir);
    let v = commands::verify(&run).map_err(|e| e.to_string())?;
    let s = commands::solve(&run, &v.ifs).map_err(|e| e.to_string())?;
    let a = commands::attractor(&run, &v.ifs, Some(&samples(&s.fp))).map_err(|e| e.to_string())?;
    let g = a.graph_vs_hutchinson.ok_or("no graph comparison")?;
    check(
        g.hausdorff <= 5.0 * g.scale,
        format!("Hausdorff {:e} <= 5 x {:e}", g.hausdorff, g.scale),
    )
}

fn matches_scalar_oracle(dir: &Path) -> Outcome {
    let run = run_for("classic", dir);
    let v = commands::verify(&run).map_err(|e| e.to_string())?;
    let s = commands::solve(&run, &v.ifs).map_err(|e| e.to_string())?;
    let d = v.ifs.data();
    let oracle = classic_fif_oracle(d.t(), d.v(), &[0.9, 0.9], 1.0 / 3.0, 256).map_err(|e| e.to_string())?;
    let mut err: f64 = 0.0;
    for (&t, &y) in oracle.t.iter().zip(&oracle.values) {
        let f = s.fp.f.eval(t).map_err(|e| e.to_string())?;
        err = err.max((f[0] - y).abs());
    }
    check(err <= 1e-6, format!("max |f1 - oracle| = {err:e} <= 1e-6"))
}

fn degenerate_is_linear(dir: &Path) -> Outcome {
    let run = run_for("degenerate", dir);
    let v = commands::verify(&run).map_err(|e| e.to_string())?;
    let s = commands::solve(&run, &v.ifs).map_err(|e| e.to_string())?;
    let lin = initial_guess(v.ifs.data(), s.fp.f.grid().clone());
    let err = s.fp.f.sup_distance(&lin);
    let iters = s.summary.iterations;
    check(
        iters == 1 && err <= 1e-12,
        format!("{iters} iteration(s), distance to piecewise linear {err:e} <= 1e-12"),
    )
}

fn dimension_bound(dir: &Path) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for name in SHIPPED {
        let run = run_for(name, dir);
        let v = commands::verify(&run).map_err(|e| e.to_string())?;
        let s = commands::solve(&run, &v.ifs).map_err(|e| e.to_string())?;
        let a = match commands::analyze(&run, Some(&samples(&s.fp))) {
            Ok(a) => a,
            Err(e) => {
                ok = false;
                detail.push(format!("{name}: {e}"));
                continue;
            }
        };
        for c in &a.components {
            ok &= c.bound_passes;
            detail.push(format!(
                "{name}/{} dim {:.4} alpha {:.4}",
                c.component, c.box_dim, c.alpha_hat
            ));
            if name == "degenerate" {
                ok &= (0.9..=1.1).contains(&c.box_dim) && (0.9..=1.0).contains(&c.alpha_hat);
            }
        }
    }
    check(ok, detail.join("; "))
}

fn synthetic_dimensions(dir: &Path) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for d in [1.0, 1.3, 1.7] {
        let mut cfg = RunConfig::load(&config_path("canonical")).unwrap();
        cfg.analysis.synthetic_dimension = Some(d);
        let run = Run::new(cfg, Some(dir.join(format!("synthetic_{d}"))), None).unwrap();
        let a = commands::analyze(&run, None).map_err(|e| e.to_string())?;
        let fitted = a.synthetic.ok_or("no synthetic section")?.fitted;
        ok &= (fitted - d).abs() <= 0.01;
        detail.push(format!("d {d} -> {fitted:.5}"));
    }
    let t: Vec<f64> = (0..=8).map(|i| i as f64 / 8.0).collect();
    let table = box_count(BoxSamples::Graph { t: &t, y: &t }, &[0.5]).map_err(|e| e.to_string())?;
    let n = table.rows[0].count;
    ok &= n == 2;
    detail.push(format!("diagonal at eps 0.5 counts {n}"));
    check(ok, detail.join("; "))
}

fn edelstein_catalog(dir: &Path) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for name in SHIPPED {
        let run = run_for(name, dir);
        match commands::verify(&run) {
            Ok(v) => {
                let r = v.summary.edelstein_max_ratio;
                ok &= r < 1.0;
                detail.push(format!("{name} ratio {r:.6}"));
            }
            Err(e) => {
                ok = false;
                detail.push(format!("{name}: {e}"));
            }
        }
    }
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/identity.toml");
    let out = Command::new(env!("CARGO_BIN_EXE_fif"))
        .args(["verify", "--config"])
        .arg(&fixture)
        .arg("--out")
        .arg(dir.join("identity"))
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    let rejected = !out.status.success() && stderr.contains("error[edelstein]");
    ok &= rejected;
    detail.push(format!("identity k = 1 rejected: {rejected}"));
    check(ok, detail.join("; "))
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn reproducible(dir: &Path) -> Outcome {
    let mut runs = Vec::new();
    for k in 0..2 {
        let out_dir = dir.join(format!("repeat_{k}"));
        let status = Command::new(env!("CARGO_BIN_EXE_fif"))
            .args(["all", "--config"])
            .arg(config_path("canonical"))
            .arg("--out")
            .arg(&out_dir)
            .args(["--seed", "7"])
            .output()
            .map_err(|e| e.to_string())?
            .status;
        if !status.success() {
            return Err(format!("run {k} exited with {status}"));
        }
        runs.push(csv_files(&out_dir));
    }
    let names: Vec<&str> = runs[0].iter().map(|(n, _)| n.as_str()).collect();
    check(
        !runs[0].is_empty() && runs[0] == runs[1],
        format!("{} CSV files byte-identical: {}", names.len(), names.join(", ")),
    )
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let criteria: [(&str, fn(&Path) -> Outcome); 9] = [
        ("interpolation at the nodes", node_residual),
        ("operator contracts on C_e", operator_contracts),
        ("graph equals attractor", graph_is_attractor),
        ("scalar oracle agreement", matches_scalar_oracle),
        ("zero contractions give the linear interpolant", degenerate_is_linear),
        ("box dimension bound", dimension_bound),
        ("box counting on synthetic counts", synthetic_dimensions),
        ("Edelstein verification", edelstein_catalog),
        ("reproducible output", reproducible),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f(tmp.path()) {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
