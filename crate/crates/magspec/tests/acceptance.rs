//! Acceptance run: one PASS/FAIL line per criterion.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use magspec::commands::{self, RegimeLabel};
use magspec::config::RunConfig;
use magspec_core::comparison::{assemble_L, inf_spectrum_1d, lambda_for_inf};
use magspec_core::eigensolver::{lowest_eigs, lowest_eigs_with, LanczosOptions};
use magspec_core::hamiltonian::{assemble, assemble_nonmagnetic_tilde, form_value, Scheme};
use magspec_core::model::{Boundary, Grid1D, Grid2D, ModelParams, PotentialSpec};
use magspec_core::sparse::{SparseHermitian, C64};
use nalgebra::DMatrix;
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

type Outcome = Result<(bool, String), String>;

fn cfg(text: &str) -> RunConfig {
    RunConfig::from_toml(text).expect("valid config").resolved(None).expect("resolvable config")
}

fn c1() -> Outcome {
    let inf = |n: usize| -> Result<f64, String> {
        let g = Grid1D::new(20.0, n, Boundary::Dirichlet).map_err(|e| e.to_string())?;
        let t = assemble_L(1.0, -1.0, &g, None, true).map_err(|e| e.to_string())?;
        inf_spectrum_1d(&t, 1e-10).map_err(|e| e.to_string())
    };
    let e = inf(4001)?;
    let errs = [inf(401)? - 0.75, inf(801)? - 0.75, inf(1601)? - 0.75];
    let order = errs.windows(2).map(|w| (w[0].abs() / w[1].abs()).log2()).fold(f64::INFINITY, f64::min);
    Ok(((e - 0.75).abs() < 1e-3 && order >= 1.0, format!("inf = {e:.8}, order = {order:.3}")))
}

/// Smallest root of `k tan k = 1` by bisection.
fn well_root() -> f64 {
    let (mut lo, mut hi) = (1e-12, std::f64::consts::FRAC_PI_2 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.tan() > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn c2() -> Outcome {
    let r = commands::critical_lambda(&cfg("[experiment]\neta_list = [0.05]\n")).map_err(|e| e.to_string())?;
    let rel = r.approximants[0].relative_error;
    let well = commands::critical_lambda(&cfg(
        "[model]\nkind = \"regular\"\npotential = \"square_well\"\nwell_half_width = 1.0\nwell_height = 1.0\npotential_nodes = 200001\n",
    ))
    .map_err(|e| e.to_string())?;
    let k = well_root();
    let oracle = -(k * k + 1.0);
    let d = (well.lambda_star - oracle).abs();
    Ok((rel < 0.02 && d < 1e-4, format!("eta 0.05 rel err = {rel:.4}, well lambda* = {:.8} vs {oracle:.8}", well.lambda_star)))
}

fn c3() -> Outcome {
    let c = cfg(
        "[model]\nomega = 0.0\nb_field = 1.0\nlambda = 0.0\n[grid]\nlx = 14.0\nly = 14.0\nnx = 561\nny = 561\n\
         [solver]\nk = 1\ntol = 5e-2\nfilter_degree = 20\n[experiment]\nlevels = [0, 1]\n",
    );
    let r = commands::landau(&c).map_err(|e| e.to_string())?;
    let lowest = &r.rows[0];
    let certs: Vec<String> = r.certificates.iter().map(|c| format!("level {} dev {:.4}", c.level, c.max_relative_deviation)).collect();
    let ok = r.converged
        && lowest.level == 0
        && lowest.relative_deviation < 0.03
        && r.certificates.len() == 2
        && r.certificates.iter().all(|c| c.max_relative_deviation < 0.03);
    Ok((ok, format!("lowest = {:.5} (dev {:.4}), {}", lowest.eigenvalue, lowest.relative_deviation, certs.join(", "))))
}

fn c4() -> Outcome {
    let c = cfg(
        "[model]\nlambda = 0.0\n[grid]\nlx = 12.0\nly = 12.0\nh = 0.05\n[solver]\nk = 1\ntol = 1e-6\n[experiment]\nband_n = [40.0, 80.0]\n",
    );
    let r = commands::spectrum(&c).map_err(|e| e.to_string())?;
    let a = 2f64.sqrt();
    let (d40, d80) = (r.bands[0].deficit.max(0.0), r.bands[1].deficit.max(0.0));
    let halving = d80 <= 0.5 * d40 + 1e-8;
    let ok = r.converged && r.ground_energy >= a - 0.01 && r.bands[0].min >= a - 0.05 && halving;
    Ok((ok, format!("ground = {:.6}, band min n=40 {:.10}, n=80 {:.10}", r.ground_energy, r.bands[0].min, r.bands[1].min)))
}

fn c5() -> Outcome {
    let run = |ly: f64| {
        commands::spectrum(&cfg(&format!(
            "[model]\nlambda = -1.0\n[grid]\nlx = 12.0\nly = {ly}\nh = 0.05\n[solver]\nk = 2\ntol = 1e-6\n"
        )))
        .map_err(|e| e.to_string())
    };
    let (a, b) = (run(12.0)?, run(24.0)?);
    let e = b.ground_energy;
    let lower = b.bracketing.as_ref().map(|x| x.overall_lower_bound).unwrap_or(f64::NAN);
    let change = (b.ground_energy - a.ground_energy).abs();
    let ok = a.converged && b.converged && e > 0.0 && e < 2f64.sqrt() && change < 1e-3 && lower <= e;
    Ok((ok, format!("ground = {e:.8}, change = {change:.2e}, lower bound = {lower:.6}")))
}

fn sweep(lambda: f64) -> Result<Vec<(f64, RegimeLabel)>, String> {
    let c = cfg(&format!(
        "[grid]\nlx = 8.0\nh = 0.05\n[solver]\nk = 1\ntol = 1e-6\n[experiment]\nlambda_list = [{lambda:?}]\nly_list = [8.0, 16.0, 32.0]\n"
    ));
    let r = commands::sweep(&c).map_err(|e| e.to_string())?;
    if !r.records.iter().all(|s| s.converged) {
        return Err("sweep did not converge".into());
    }
    Ok(r.records.iter().map(|s| (s.ground_energy, s.regime_label)).collect())
}

fn c6() -> Outcome {
    let s = sweep(-3.0)?;
    let e: Vec<f64> = s.iter().map(|x| x.0).collect();
    let decreasing = e.windows(2).all(|w| w[1] < w[0]);
    let ok = decreasing && e[0] - e[2] > 2.0 && e[2] < -1.0 && s[0].1 == RegimeLabel::Supercritical;
    Ok((ok, format!("ground = {e:.2?}, label {:?}", s[0].1)))
}

fn c7() -> Outcome {
    let s = sweep(-2.0)?;
    let last = s[2].0;
    let mut ok = (-0.02..=0.1).contains(&last);
    let mut detail = format!("ground at ly=32 = {last:.6}");
    for mu in [0.0, 1.0] {
        let q = commands::quasimode(&cfg(&format!(
            "[model]\nlambda = -2.0\n[experiment]\nconstruction = \"critical\"\nmu = {mu:?}\nschedule = [8.0, 16.0, 32.0]\n"
        )))
        .map_err(|e| e.to_string())?;
        ok &= q.residual_decreasing;
        let res: Vec<String> = q.rows.iter().map(|r| format!("{:.4}", r.residual)).collect();
        detail += &format!(", mu={mu} residuals [{}]", res.join(", "));
    }
    Ok((ok, detail))
}

fn c8() -> Outcome {
    let p = commands::quasimode(&cfg(
        "[model]\nlambda = -1.0\n[experiment]\nconstruction = \"packet\"\nmu = 2.0\neps = 0.1\nschedule = [64.0]\n",
    ))
    .map_err(|e| e.to_string())?;
    let row = &p.rows[0];
    let s = commands::quasimode(&cfg(
        "[model]\nlambda = -3.0\n[experiment]\nconstruction = \"supercritical\"\nmu = -1.0\nschedule = [100.0]\n",
    ))
    .map_err(|e| e.to_string())?;
    let orth = s.orthogonality.unwrap_or(f64::INFINITY);
    let ok = row.passes == Some(true) && s.rows[0].norm >= 0.5 && orth.abs() <= 1e-8;
    Ok((
        ok,
        format!(
            "packet |phi|^2 = {:.4}, rel^2 = {:.3e} <= {:.3e}; supercritical |psi| = {:.4}, orthogonality = {orth:.2e}",
            row.norm * row.norm,
            row.rel_residual * row.rel_residual,
            row.bound.unwrap_or(f64::NAN),
            s.rows[0].norm
        ),
    ))
}

fn dense_eigs(h: &SparseHermitian) -> Vec<f64> {
    let n = h.dim();
    let d = h.to_dense_c64();
    let m = DMatrix::from_fn(n, n, |i, j| d[i][j]);
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

fn random_hermitian(n: usize, seed: u64) -> SparseHermitian {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut u = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    let mut rows = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        rows[i][i] = C64::new(u(), 0.0);
        for j in 0..i {
            let v = C64::new(u(), u());
            rows[i][j] = v;
            rows[j][i] = v.conj();
        }
    }
    SparseHermitian::from_dense(&rows)
}

fn c9() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let h = random_hermitian(200, 7000 + seed);
        let dense = dense_eigs(&h);
        let r = lowest_eigs(&h, 4, 1e-10, 5000, seed).map_err(|e| e.to_string())?;
        for (e, d) in r.eigenvalues.iter().zip(&dense) {
            worst = worst.max((e - d).abs());
        }
    }
    let g = Grid2D::new(3.0, 3.0, 41, 41, Boundary::Dirichlet).map_err(|e| e.to_string())?;
    let h = assemble(&ModelParams::delta(1.0, 1.0, -1.0), &g, Scheme::Peierls).map_err(|e| e.to_string())?;
    let dense = dense_eigs(&h);
    let mut o = LanczosOptions::new(4, 1e-10, 5000, 0);
    o.filter_degree = 12;
    let r = lowest_eigs_with(&h, &o).map_err(|e| e.to_string())?;
    let grid_err = r.eigenvalues.iter().zip(&dense).map(|(e, d)| (e - d).abs()).fold(0.0, f64::max);
    Ok((worst < 1e-8 && grid_err < 1e-8, format!("random max err = {worst:.1e}, grid (dim {}) max err = {grid_err:.1e}", h.dim())))
}

fn c10() -> Outcome {
    let g = Grid2D::new(3.0, 3.0, 41, 41, Boundary::Dirichlet).map_err(|e| e.to_string())?;
    let p = ModelParams::delta(1.0, 1.0, -1.0);
    let h = assemble(&p, &g, Scheme::DirectCentral).map_err(|e| e.to_string())?;
    let t = assemble_nonmagnetic_tilde(&p, &g).map_err(|e| e.to_string())?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let u: Vec<C64> = (0..g.dim()).map(|_| C64::new((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5, 0.0)).collect();
        let a = form_value(&h, &u).map_err(|e| e.to_string())?;
        let b = form_value(&t, &u).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).abs() / a.abs().max(1.0));
    }
    Ok((worst <= 1e-12, format!("max relative difference = {worst:.1e}")))
}

fn c11() -> Outcome {
    let v = PotentialSpec::square_well(1.0, 1.0, 201).map_err(|e| e.to_string())?;
    let lambda = lambda_for_inf(1.0, &v, 0.2).map_err(|e| e.to_string())?;
    let r = commands::existence(&cfg(&format!(
        "[model]\nkind = \"regular\"\npotential = \"square_well\"\npotential_nodes = 201\nlambda = {lambda:?}\n\
         [experiment]\nk_list = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0]\ntilde_check = false\n"
    )))
    .map_err(|e| e.to_string())?;
    let fit = r.fit.as_ref();
    let signs = fit.is_some_and(|f| f.kinetic > 0.0 && f.attraction > 0.0);
    let ok = r.first_below.is_some_and(|k| k <= 256.0) && signs;
    Ok((ok, format!("inf L = {:.4}, first k below = {:?}, fit = {fit:?}", r.inf_l, r.first_below)))
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .map(|d| d.filter_map(|e| e.ok()).map(|e| (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap_or_default())).collect())
        .unwrap_or_default();
    v.sort();
    v
}

fn c12() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [
        ("spectrum", "[model]\nlambda = -1.0\n[grid]\nlx = 4.0\nly = 4.0\nh = 0.1\n[solver]\nk = 3\ntol = 1e-9\n[experiment]\nband_n = [20.0]\n"),
        ("sweep", "[grid]\nlx = 4.0\nh = 0.1\n[solver]\nk = 2\n[experiment]\nlambda_list = [-1.0, -3.0]\nly_list = [4.0, 8.0]\n"),
        ("landau", "[model]\nomega = 0.0\n[grid]\nlx = 5.0\nly = 5.0\nh = 0.1\n[solver]\nk = 4\ntol = 1e-6\n[experiment]\norbital_offset = 1.0\n"),
        ("quasimode", "[model]\nlambda = -3.0\n[experiment]\nconstruction = \"supercritical\"\nmu = 0.0\nschedule = [10.0, 100.0]\n"),
        ("critical-lambda", "[experiment]\neta_list = [0.2]\n"),
        ("existence", "[model]\nkind = \"regular\"\npotential = \"square_well\"\nlambda = -1.0\n[grid]\nlx = 3.0\nly = 3.0\nh = 0.1\n[experiment]\nk_list = [4.0, 8.0]\n"),
    ];
    let mut count = 0;
    for (cmd, text) in runs {
        let config = tmp.path().join(format!("{cmd}.toml"));
        fs::write(&config, text).map_err(|e| e.to_string())?;
        let mut outs = Vec::new();
        for rep in 0..2 {
            let out = tmp.path().join(format!("{cmd}-{rep}"));
            let status = Command::new(env!("CARGO_BIN_EXE_magspec"))
                .args([cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "11"])
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Ok((false, format!("{cmd} exited with {status}")));
            }
            outs.push(files(&out));
        }
        if outs[0].is_empty() || outs[0] != outs[1] {
            return Ok((false, format!("{cmd} outputs differ")));
        }
        count += outs[0].len();
    }
    Ok((true, format!("{count} files identical across {} commands", runs.len())))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("1D delta comparison operator", Duration::from_secs(1), c1),
        ("critical coupling", Duration::from_secs(10), c2),
        ("Landau levels", Duration::from_secs(300), c3),
        ("essential-spectrum threshold", Duration::from_secs(300), c4),
        ("subcritical discrete spectrum", Duration::from_secs(600), c5),
        ("supercritical dive", Duration::from_secs(900), c6),
        ("critical regime", Duration::from_secs(600), c7),
        ("quasimode certificates", Duration::from_secs(600), c8),
        ("Lanczos vs dense eigensolve", Duration::from_secs(60), c9),
        ("real-form identity", Duration::from_secs(1), c10),
        ("regular-model existence", Duration::from_secs(300), c11),
        ("determinism", Duration::MAX, c12),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let dt = t.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, d)) => (ok && dt < *limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!("{} criterion {:>2} {name}: {detail} [{:.2} s]", if ok { "PASS" } else { "FAIL" }, i + 1, dt.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
