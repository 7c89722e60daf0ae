//! One line per headline criterion, then a single assertion over all of them.

use num_complex::Complex64;
use qcs::bounds::{quasidisc_mk, quasidisc_mk_grid};
use qcs::bounds::{beta_norm, lower_bound_thm51, thm51_factor};
use qcs::cli::{self, Command, RunConfig};
use qcs::dilatation::{matrix_from_mu, roundtrip_check};
use qcs::fem::checks::DEFAULT_CHECK_QUAD;
use qcs::fem::*;
use qcs::qcmaps::{example_maps, make_cusp_map, make_ellipse_map, make_rose_petal_map, DomainSpec};
use qcs::special::DISC_MU1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::Command as Proc;
use std::time::Instant;

const BUDGET: f64 = 0.02;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Ledger(Vec<(usize, bool)>);

impl Ledger {
    fn record(&mut self, id: usize, ok: bool, detail: String) {
        println!("criterion {id:>2}: {} {detail}", if ok { "PASS" } else { "FAIL" });
        self.0.push((id, ok));
    }
}

fn disc_oracle() -> (bool, String) {
    let t = Instant::now();
    let r = solve_laplacian(&DomainSpec::unit_disc(), 72, 448, &EigenOptions::default()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let ok = rel(r.mu1_fem, DISC_MU1) <= BUDGET && (r.mesh_h - 0.02).abs() < 0.002 && secs < 30.0;
    (ok, format!("disc mu1 = {:.6} (rel {:.2e}), h = {:.4}, {secs:.1} s", r.mu1_fem, rel(r.mu1_fem, DISC_MU1), r.mesh_h))
}

fn ellipse_exactness() -> (bool, String) {
    let map = make_ellipse_map(2.0, 1.0).unwrap();
    let r = solve_map(&map, Mesher::Pullback, 72, 448, &EigenOptions::default()).unwrap();
    let target = DISC_MU1 / 3.0;
    let thm47 = qcs::bounds::lower_bound_thm47(&map).unwrap().value;
    let ok = rel(r.mu1_fem, target) <= BUDGET && rel(thm47, r.mu1_fem) <= BUDGET;
    (ok, format!("ellipse mu1 = {:.6}, j'^2/3 = {target:.6}, bound = {thm47:.6}", r.mu1_fem))
}

fn paper_orderings() -> (bool, String) {
    let direct = PI * PI / 108.0 < DISC_MU1 / 3.0 && (PI / 4.0).powi(2) < DISC_MU1;
    let mut config = RunConfig::new(Command::ReproduceExamples);
    config.n_radial = 16;
    config.n_angular = 64;
    let out = cli::emit(&config, &cli::run(&config).unwrap()).unwrap();
    let printed = ["pi^2/108 < j'^2/3:", "(pi/4)^2 < j'^2:"]
        .iter()
        .all(|label| out.lines().any(|l| l.starts_with(label) && l.ends_with(" holds")));
    (direct && printed, format!("direct {direct}, printed by reproduce-examples {printed}"))
}

fn petal_and_cusp() -> (bool, String) {
    let opts = EigenOptions::default();
    let p = solve_map(&make_rose_petal_map(), Mesher::Pullback, 48, 256, &opts).unwrap().mu1_fem;
    let c = solve_map(&make_cusp_map(), Mesher::Pullback, 48, 256, &opts).unwrap().mu1_fem;
    let ok = p >= DISC_MU1 * (1.0 - BUDGET) && c >= DISC_MU1 / 2.0 * (1.0 - BUDGET);
    (ok, format!("petal {p:.5} vs {DISC_MU1:.5}, cusp {c:.5} vs {:.5}", DISC_MU1 / 2.0))
}

fn isometry() -> (bool, String) {
    let funcs = [TestFunction::Linear, TestFunction::Polynomial, TestFunction::ExpCos];
    let mut worst: f64 = 0.0;
    let mut shrinks = true;
    for map in example_maps() {
        for f in funcs {
            worst = worst.max(isometry_check(&map, f.id(), DEFAULT_CHECK_QUAD).unwrap().rel_err);
        }
        let errs: Vec<f64> =
            [4, 8, 16].iter().map(|&n| isometry_check(&map, TestFunction::BesselMode.id(), n).unwrap().rel_err).collect();
        shrinks &= errs[0] > errs[2] && errs.windows(2).all(|w| w[1] <= w[0].max(1e-13));
    }
    (worst <= 1e-3 && shrinks, format!("worst rel_err {worst:.2e}, shrinks under refinement {shrinks}"))
}

fn dilatation_algebra() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut res, mut det, mut band) = (0.0f64, 0.0f64, true);
    for _ in 0..1000 {
        let mu = Complex64::from_polar(0.95 * rng.random::<f64>().sqrt(), rng.random_range(-PI..PI));
        res = res.max(roundtrip_check(mu).unwrap());
        let a = matrix_from_mu(mu).unwrap();
        det = det.max((a.det() - 1.0).abs());
        let k = (1.0 + mu.norm()) / (1.0 - mu.norm());
        let (lo, hi) = a.eigenvalues();
        band &= lo >= 1.0 / k - 1e-10 && hi <= k + 1e-10;
    }
    (res <= 1e-12 && det <= 1e-12 && band, format!("max residual {res:.1e}, max |det - 1| {det:.1e}, band {band}"))
}

fn beta_quadrature() -> (bool, String) {
    let mut worst: f64 = 0.0;
    for beta in [1.5, 2.0, 3.0] {
        let e = beta_norm(&make_ellipse_map(2.0, 1.0).unwrap(), beta, 64).unwrap();
        worst = worst.max(rel(e.integral, PI * 3f64.powf(beta)));
        let p = beta_norm(&make_rose_petal_map(), beta, 64).unwrap();
        worst = worst.max(rel(p.integral, PI));
    }
    let cusp = make_cusp_map();
    let a = beta_norm(&cusp, 2.0, 64).unwrap().integral;
    let b = beta_norm(&cusp, 2.0, 128).unwrap().integral;
    let stable = rel(b, a);
    (worst <= 1e-10 && stable <= 1e-6, format!("closed forms {worst:.1e}, cusp refinement {stable:.1e}"))
}

fn thm51_values() -> (bool, String) {
    let opts = EigenOptions::default();
    let cases = [(make_ellipse_map(2.0, 1.0).unwrap(), 1.0 / (12.0 * 3f64.powf(1.5))), (make_rose_petal_map(), 1.0 / (4.0 * 3f64.powf(1.5)))];
    let mut ok = (thm51_factor(2.0) - 4.0 / PI.sqrt() * 3f64.powf(1.5)).abs() <= 1e-12;
    let mut detail = String::new();
    for (map, exact) in cases {
        let b = lower_bound_thm51(&map, 2.0, 64).unwrap().value;
        let fem = solve_map(&map, Mesher::Pullback, 32, 128, &opts).unwrap().mu1_fem;
        ok &= (b - exact).abs() <= 1e-12 && b <= fem;
        detail += &format!("{}: {b:.12} <= {fem:.5}; ", map.id());
    }
    (ok, detail)
}

fn quasidisc_pipeline() -> (bool, String) {
    let mut prev = f64::INFINITY;
    let (mut nu, mut grid, mut decreasing, mut finite) = (0.0f64, 0.0f64, true, true);
    for k in [1.0, 1.5, 2.0, 4.0] {
        let c = quasidisc_mk(k).unwrap();
        let g = quasidisc_mk_grid(k, 1_000_000).unwrap();
        nu = nu.max(c.ln_nu_at_root.exp_m1().abs());
        grid = grid.max((c.log10_m - g).abs() / c.log10_m.abs());
        decreasing &= c.log10_m < prev;
        finite &= c.log10_m.is_finite() && c.delta_tilde.is_finite() && c.delta_opt > 0.0;
        prev = c.log10_m;
    }
    let ok = nu <= 1e-9 && grid <= 1e-9 && decreasing && finite;
    (ok, format!("|nu - 1| {nu:.1e}, grid gap {grid:.1e}, decreasing {decreasing}, finite {finite}"))
}

fn thin_ellipse() -> (bool, String) {
    let rows = cli::thin_ellipse_sweep(&[0.1, 0.01, 0.001, 0.0001]).unwrap();
    let x: Vec<f64> = rows.iter().map(|r| r.jacobian_inverse.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.thm47.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let slope = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
        / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    let ratios: Vec<f64> = rows.iter().map(|r| r.classical / r.a_minus_b).collect();
    let settles = rel(ratios[3], ratios[2]) < 1e-3;
    let ok = (slope + 1.0).abs() <= 0.01 && settles && rows[3].classical < 1e-4;
    (ok, format!("slope {slope:.6}, classical/(a-b) -> {:.6}", ratios[3]))
}

fn poincare() -> (bool, String) {
    let mut worst = f64::INFINITY;
    for map in example_maps() {
        for r in [1.0, 2.0, 4.0] {
            for f in TestFunction::ALL {
                worst = worst.min(weighted_poincare_check(&map, r, f.id(), DEFAULT_CHECK_QUAD).unwrap().margin);
            }
        }
    }
    (worst >= -1e-6, format!("smallest margin {worst:.3e}"))
}

fn determinism() -> (bool, String) {
    let run = |threads: &str| {
        Proc::new(env!("CARGO_BIN_EXE_qcs"))
            .args(["verify", "--map", "cusp", "--nr", "16", "--na", "64", "--format", "json"])
            .env("QCS_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let first = run("1");
    let repeat = first == run("1") && first == run("3");
    let map = make_cusp_map();
    let mesh = mesh_pullback(&map, 24, 96).unwrap();
    let field = qcs::dilatation::MatrixField::from_map(&map);
    let pooled = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            let (s, m) = assemble(&mesh, &field).unwrap();
            (s.values, m.values, beta_norm(&map, 2.0, 64).unwrap().integral.to_bits())
        })
    };
    let base = pooled(1);
    let threads = [2, 4].iter().all(|&t| pooled(t) == base);
    (repeat && threads, format!("byte-identical CLI runs {repeat}, thread invariance {threads}"))
}

#[test]
fn acceptance() {
    let criteria: [fn() -> (bool, String); 12] = [
        disc_oracle,
        ellipse_exactness,
        paper_orderings,
        petal_and_cusp,
        isometry,
        dilatation_algebra,
        beta_quadrature,
        thm51_values,
        quasidisc_pipeline,
        thin_ellipse,
        poincare,
        determinism,
    ];
    let mut ledger = Ledger(Vec::new());
    for (i, check) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        ledger.record(i + 1, ok, detail);
    }
    let failed: Vec<usize> = ledger.0.iter().filter(|(_, ok)| !ok).map(|(id, _)| *id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
