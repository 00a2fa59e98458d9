//! Acceptance suite: one PASS/FAIL line per criterion.

use std::sync::OnceLock;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invroot::convergence::{corrected_h, paper_g, residual_map, DEFAULT_Q_CAP};
use invroot::harness::{run_experiment, ExperimentConfig, ExperimentResult};
use invroot::iteration::{mult_count, residual};
use invroot::{
    altman_step, bini_step, estimate_order, generate_spd, matrix_invroot, matrix_step, newton_schulz_step,
    pan_reif_init, scalar_invroot, InitPolicy, IterationParams, Mat, MatrixSpec, MultLedger, Params, Real,
    ScanBound, StabilityTable, StopCriterion, TwoFloat,
};
use validation::{fmt_list, run_all, within, Criterion, Verdict};

/// Quick-mode ensembles: n = 200 at the same non-zeros per row as n = 1000, d = 0.003.
const ENSEMBLE_N: usize = 200;
const ENSEMBLE_DENSITY: f64 = 0.015;
const ENSEMBLE_SEEDS: usize = 10;

fn scalar_counts(lambda: f64) -> (Vec<f64>, bool) {
    let mut all_converged = true;
    let counts = (2..=8)
        .map(|q| {
            let rep = scalar_invroot(lambda, &Params::scalar(2, q), 1.0).expect("scalar run");
            all_converged &= rep.converged();
            rep.iterations as f64
        })
        .collect();
    (counts, all_converged)
}

fn scalar_table(lambda: f64, want: &[f64]) -> Verdict {
    let start = Instant::now();
    let (got, converged) = scalar_counts(lambda);
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        converged && within(&got, want, 1.0) && secs < 1.0,
        format!("q=2..8 got {} want {} (tol 1), {secs:.3}s", fmt_list(&got), fmt_list(want)),
    )
}

fn c1() -> Verdict {
    scalar_table(1.5, &[5.0, 4.0, 3.0, 4.0, 3.0, 4.0, 4.0])
}

fn c2() -> Verdict {
    scalar_table(1e-9, &[27.0, 17.0, 14.0, 12.0, 11.0, 10.0, 10.0])
}

fn c3() -> Verdict {
    let start = Instant::now();
    let t = StabilityTable::compute(2..=10, 3..=10, 1e-4, DEFAULT_Q_CAP, 20);
    let secs = start.elapsed().as_secs_f64();
    let want_q: Vec<ScanBound> = [15, 8, 7, 6, 6, 5, 5, 5, 5].into_iter().map(ScanBound::Max).collect();
    let want_p: Vec<ScanBound> = [None, None, None, Some(6), Some(4), Some(3), Some(2), Some(2)]
        .into_iter()
        .map(|v| v.map_or(ScanBound::AtCap(20), ScanBound::Max))
        .collect();
    let got_q: Vec<ScanBound> = t.rows.iter().map(|r| r.1).collect();
    let got_p: Vec<ScanBound> = t.cols.iter().map(|c| c.1).collect();
    Verdict::new(
        got_q == want_q && got_p == want_p && secs < 30.0,
        format!("max_q {} max_p {}, {secs:.2}s", fmt_list(&got_q), fmt_list(&got_p)),
    )
}

fn ensemble_below_one() -> &'static ExperimentResult {
    static CELL: OnceLock<ExperimentResult> = OnceLock::new();
    CELL.get_or_init(|| {
        let cfg = ExperimentConfig {
            specs: vec![MatrixSpec::new(ENSEMBLE_N, ENSEMBLE_DENSITY, 500.0, 0.999, 1)],
            ps: vec![1, 4],
            qs: (2..=6).collect(),
            seeds_per_cell: ENSEMBLE_SEEDS,
            ..ExperimentConfig::default()
        };
        run_experiment(&cfg).expect("ensemble run")
    })
}

fn ensemble_radius_ten() -> &'static ExperimentResult {
    static CELL: OnceLock<ExperimentResult> = OnceLock::new();
    CELL.get_or_init(|| {
        let cfg = ExperimentConfig {
            specs: vec![MatrixSpec::new(ENSEMBLE_N, ENSEMBLE_DENSITY, 500.0, 10.0, 1)],
            ps: vec![3],
            qs: (2..=6).collect(),
            init_policy: InitPolicy::PanReif,
            seeds_per_cell: ENSEMBLE_SEEDS,
            ..ExperimentConfig::default()
        };
        run_experiment(&cfg).expect("ensemble run")
    })
}

/// Counts converged residual-criterion runs and how many break the identity.
fn ledger_sweep() -> (usize, usize) {
    let (mut checked, mut bad) = (0, 0);
    for seed in 0..6u64 {
        let a = generate_spd(&MatrixSpec::new(12, 0.5, 50.0, 0.99, seed)).expect("matrix");
        for p in 1..=6 {
            for q in 2..=8 {
                let rep = matrix_invroot(&a, &Params::matrix(p, q).with_epsilon(1e-10)).expect("run");
                if rep.converged() {
                    checked += 1;
                    bad += (rep.mults != mult_count(p, q, rep.iterations)) as usize;
                }
            }
        }
    }
    (checked, bad)
}

fn c4() -> Verdict {
    let spots = [(1, 2, 13, 27), (4, 4, 5, 39), (3, 5, 15, 108)];
    let spots_ok = spots.iter().all(|&(p, q, j, m)| mult_count(p, q, j) == m);
    let (mut checked, mut bad) = ledger_sweep();
    for res in [ensemble_below_one(), ensemble_radius_ten()] {
        for row in res.rows.iter().filter(|r| r.converged) {
            checked += 1;
            bad += (row.mults != mult_count(row.p, row.q, row.iterations)) as usize;
        }
    }
    Verdict::new(
        spots_ok && bad == 0 && checked > 0,
        format!("spot checks {}, {checked} converged runs, {bad} mismatches", if spots_ok { "ok" } else { "wrong" }),
    )
}

/// Mean iterations for q=2..6 at `p`, the q with the fewest mean products,
/// and whether every run converged.
fn cell_summary(res: &ExperimentResult, p: u32) -> (Vec<f64>, u32, bool) {
    let rows: Vec<_> = res.aggregates.iter().filter(|a| a.p == p).collect();
    let means = rows.iter().map(|a| a.mean_iterations).collect();
    let best = rows.iter().min_by(|a, b| a.mean_mults.total_cmp(&b.mean_mults)).map_or(0, |a| a.q);
    let all = rows.iter().all(|a| a.converged == a.runs);
    (means, best, all)
}

fn ensemble_check(res: &ExperimentResult, p: u32, want: &[f64], tol: f64, want_q: u32) -> (bool, String) {
    let (means, best, all) = cell_summary(res, p);
    let ok = all && within(&means, want, tol) && best == want_q;
    (
        ok,
        format!("p={p}: mean iterations {} want {} (tol {tol}), argmin q={best} want {want_q}", fmt_list(&means), fmt_list(want)),
    )
}

fn c5() -> Verdict {
    let res = ensemble_below_one();
    let (ok1, d1) = ensemble_check(res, 1, &[13.0, 8.0, 7.0, 6.0, 5.0], 1.0, 3);
    let (ok4, d4) = ensemble_check(res, 4, &[10.0, 6.0, 5.0, 5.0, 5.0], 1.0, 4);
    Verdict::new(ok1 && ok4, format!("{d1}; {d4}"))
}

fn c6() -> Verdict {
    let (ok, d) = ensemble_check(ensemble_radius_ten(), 3, &[55.0, 23.0, 18.0, 15.0, 14.0], 2.0, 5);
    Verdict::new(ok, d)
}

fn rel_diff(x: &Mat, y: &Mat) -> f64 {
    x.sub(y).frobenius() / y.frobenius()
}

fn c7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut bini, mut altman, mut ns) = (0.0f64, 0.0f64, 0.0f64);
    for trial in 0..100u64 {
        let n = rng.gen_range(2..=12);
        let cond = 10f64.powf(rng.gen_range(0.0..3.0));
        let spec = MatrixSpec::new(n, 1.0, cond, rng.gen_range(0.2..1.0), trial);
        let a = generate_spd(&spec).expect("matrix");
        let b = Mat::identity(n).scale(rng.gen_range(0.5..1.0)).add(&a.as_matrix().scale(rng.gen_range(0.0..0.5)));
        let p = rng.gen_range(1..=4);
        let q = rng.gen_range(2..=6);
        let mut l = MultLedger::new();
        let step = |p, q, l: &mut MultLedger| matrix_step(&b, &a, p, q, l).expect("step").0;
        bini = bini.max(rel_diff(&step(p, 2, &mut l), &bini_step(&b, &a, p, &mut l).expect("bini")));
        altman = altman.max(rel_diff(&step(1, q, &mut l), &altman_step(&b, &a, q, &mut l).expect("altman")));
        ns = ns.max(rel_diff(&step(1, 2, &mut l), &newton_schulz_step(&b, &a, &mut l).expect("ns")));
    }
    Verdict::new(
        bini <= 1e-13 && altman <= 1e-13 && ns <= 1e-13,
        format!("max relative gap: bini {bini:.2e}, altman {altman:.2e}, newton-schulz {ns:.2e} (tol 1e-13)"),
    )
}

fn order_at(p: u32, q: u32) -> f64 {
    let lit = <TwoFloat as Real>::lit;
    let params = IterationParams::<TwoFloat>::scalar(p, q).with_epsilon(lit(1e-30)).with_max_iter(100);
    let rep = scalar_invroot(lit(0.5), &params, lit(1.0)).expect("scalar run");
    estimate_order(&rep.error_history).map_or(f64::NAN, |o| o.as_f64())
}

fn c8() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut check = |p: u32, q: u32, want: f64| {
        let got = order_at(p, q);
        ok &= (got - want).abs() <= 0.3;
        parts.push(format!("({p},{q})={got:.2}"));
    };
    for q in 2..=4 {
        check(1, q, q as f64);
    }
    for p in 2..=4 {
        for q in [2, 4, 6] {
            check(p, q, 2.0);
        }
    }
    Verdict::new(ok, format!("{} (tol 0.3)", parts.join(" ")))
}

fn c9() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = rng.gen_range(1..=6);
        let q = rng.gen_range(2..=8);
        let r: f64 = loop {
            let r = rng.gen::<f64>();
            if r > 0.0 {
                break r;
            }
        };
        let exact = residual_map(p, q, r).expect("in domain");
        worst = worst.max((exact - r * corrected_h(r, p, q)).abs());
    }
    let printed = 0.5 * paper_g(0.5, 2, 2);
    let exact = residual_map(2, 2, 0.5).expect("in domain");
    let pinned = (printed - 0.0546875).abs() <= 1e-15 && (exact - 0.21875).abs() <= 1e-15;
    Verdict::new(
        worst <= 1e-12 && pinned,
        format!("max |map - r h| = {worst:.2e} (tol 1e-12); p=q=2, r=0.5: printed {printed} vs exact {exact}"),
    )
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

type RMat = Vec<Vec<BigRational>>;

fn to_rational(m: &Mat) -> RMat {
    (0..m.n()).map(|i| m.row(i).iter().map(|&x| rational(x)).collect()).collect()
}

fn rmul(a: &RMat, b: &RMat) -> RMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |s, k| s + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Exact positive-definiteness of a symmetric rational matrix via LDL^T pivots.
fn positive_definite(mut g: RMat) -> bool {
    let n = g.len();
    for k in 0..n {
        if !g[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            let f = &g[i][k] / &g[k][k];
            for j in k + 1..n {
                let t = &f * &g[k][j];
                g[i][j] -= t;
            }
        }
    }
    true
}

/// `|I - B0^p A|_2 < 1` exactly, as `I - R^T R` positive definite.
fn contracts_exactly(a: &Mat, b0: &Mat, p: u32) -> bool {
    let n = a.n();
    let (ar, br) = (to_rational(a), to_rational(b0));
    let mut m = br.clone();
    for _ in 1..p {
        m = rmul(&m, &br);
    }
    let m = rmul(&m, &ar);
    let eye = |i: usize, j: usize| if i == j { BigRational::one() } else { BigRational::zero() };
    let r: RMat = (0..n).map(|i| (0..n).map(|j| eye(i, j) - &m[i][j]).collect()).collect();
    let g: RMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| eye(i, j) - (0..n).fold(BigRational::zero(), |s, k| s + &r[k][i] * &r[k][j]))
                .collect()
        })
        .collect();
    positive_definite(g)
}

fn c10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut exact_ok, mut worst) = (0, 0.0f64);
    for trial in 0..100u64 {
        let n = rng.gen_range(2..=8);
        let density = rng.gen_range(1.0 / n as f64..=1.0);
        let cond = 10f64.powf(rng.gen_range(0.0..2.0));
        let rho = rng.gen_range(1.0..=100.0);
        let p = rng.gen_range(1..=5);
        let a = generate_spd(&MatrixSpec::new(n, density, cond, rho, trial)).expect("matrix");
        let b0 = pan_reif_init(&a).expect("start").into_matrix();
        let r0 = residual(&a, &b0, p, &mut MultLedger::new()).expect("residual");
        worst = worst.max(r0.norm_two().expect("norm"));
        exact_ok += contracts_exactly(&a, &b0, p) as usize;
    }
    Verdict::new(
        exact_ok == 100,
        format!("{exact_ok}/100 strictly contracting in exact arithmetic; largest f64 norm {worst}"),
    )
}

fn c11() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in 1..=3u32 {
        let run = |lambda: f64| scalar_invroot(lambda, &Params::scalar(p, 2), 1.0).expect("scalar run");
        let inside = run(p as f64 + 0.9);
        let outside = run(p as f64 + 1.1);
        ok &= inside.converged() && !outside.converged();
        parts.push(format!("p={p}: {} / {}", inside.outcome, outside.outcome));
    }
    Verdict::new(ok, parts.join(", "))
}

fn c12() -> Verdict {
    let conds = [1e3, 1e6, 1e9];
    let cfg = ExperimentConfig {
        specs: conds.iter().map(|&c| MatrixSpec::new(200, 0.1, c, 0.999, 1)).collect(),
        ps: vec![1, 4],
        qs: vec![2, 6],
        seeds_per_cell: 1,
        precision: true,
        stop_criterion: StopCriterion::ResidualNorm,
        ..ExperimentConfig::default()
    };
    let res = run_experiment(&cfg).expect("precision run");
    let find = |cond: f64, p: u32, q: u32| {
        res.rows.iter().find(|r| r.cond == cond && r.p == p && r.q == q).expect("row present")
    };
    let good = find(1e3, 4, 6);
    let good_err = good.final_error.unwrap_or(f64::INFINITY);
    let mut ok = good.final_residual <= 1e-5 && good_err <= 1e-6;
    let mut parts = vec![format!("k=1e3,p=4,q=6: res {:.1e} err {:.1e}", good.final_residual, good_err)];
    for q in [2, 6] {
        let bad = find(1e9, 4, q);
        let err = bad.final_error.unwrap_or(f64::NAN);
        ok &= bad.final_residual >= 1e-1 && err > 1.0;
        parts.push(format!("k=1e9,p=4,q={q}: res {:.2} err {:.2e}", bad.final_residual, err));
    }
    let mut faster = 0;
    for &c in &conds {
        for p in [1, 4] {
            faster += (find(c, p, 6).iterations < find(c, p, 2).iterations) as usize;
        }
    }
    ok &= faster == 6;
    parts.push(format!("q=6 faster than q=2 in {faster}/6 cells"));
    Verdict::new(ok, parts.join("; "))
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "scalar counts, p=2, lambda=1.5", run: c1 },
        Criterion { id: 2, title: "scalar counts, p=2, lambda=1e-9", run: c2 },
        Criterion { id: 3, title: "stability table", run: c3 },
        Criterion { id: 4, title: "multiplication ledger identity", run: c4 },
        Criterion { id: 5, title: "ensembles, rho<1, identity start", run: c5 },
        Criterion { id: 6, title: "ensembles, rho=10, scaled start", run: c6 },
        Criterion { id: 7, title: "special-case equivalence", run: c7 },
        Criterion { id: 8, title: "empirical convergence order", run: c8 },
        Criterion { id: 9, title: "one-step residual map", run: c9 },
        Criterion { id: 10, title: "scaled start contracts", run: c10 },
        Criterion { id: 11, title: "quadratic case radius", run: c11 },
        Criterion { id: 12, title: "attainable precision", run: c12 },
    ];
    if !run_all(&criteria) {
        std::process::exit(1);
    }
}
