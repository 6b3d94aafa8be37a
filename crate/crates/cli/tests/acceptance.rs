//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{mutate, oracle_cumulative, random_trajectory, simpson, ALL_MUTATIONS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riskcheck_core::distance::{
    default_support_cap, exact_tv_small, stein_chen_tv_bound, DiscretizedFailureProcess,
};
use riskcheck_core::grid::uniform_grid;
use riskcheck_core::hazard::{
    validate_trajectory, HazardForm, HazardSegment, HazardTrajectory, TrajectorySpec,
};
use riskcheck_core::pra::check_stochastic_order;
use riskcheck_core::sampling::{
    dkw_epsilon, ks_two_sample, sample_failure_time_thinning, sample_many, sample_replicates,
    two_sample_threshold, SeededStream,
};
use riskcheck_core::scenario::{build_trajectory, catalog_scenario};
use riskcheck_core::schema::{parse_document, trajectory_json, Document};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion(id: u8, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let pass = out.pass && in_time;
    let limit_text = limit.map_or(String::new(), |l| format!(", limit {:.0?}", l));
    println!(
        "criterion {id:>2} {} {name}: {} ({:.2?}{limit_text})",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed
    );
    pass
}

fn single(form: HazardForm) -> HazardTrajectory {
    HazardTrajectory::new(TrajectorySpec {
        segments: vec![HazardSegment::new(0.0, form)],
        maintenance_epochs: vec![],
    })
    .unwrap()
}

fn constant_reliability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let h = (rng.random_range(-5.0f64..2.0)).exp();
        let t = rng.random_range(0.0..20.0 / h);
        let traj = HazardTrajectory::constant(h).unwrap();
        worst = worst.max((traj.reliability(t).unwrap() - (-h * t).exp()).abs());
    }
    outcome(
        worst <= 1e-12,
        format!("max |R - e^(-ht)| = {worst:.2e} over 100 pairs"),
    )
}

fn ordering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let traj = HazardTrajectory::new(random_trajectory(&mut rng, 0)).unwrap();
        let h0 = traj.initial_hazard();
        let grid = uniform_grid(5.0 / h0, 64).unwrap();
        for &t in &grid {
            let gap = traj.failure_cdf(t).unwrap() - (-(-h0 * t).exp_m1());
            worst = worst.min(gap);
            if gap < -1e-9 {
                violations += 1;
            }
        }
        if !check_stochastic_order(&traj, &grid).unwrap().ordering_holds {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violations on 1000 x 64, min gap {worst:.2e}"),
    )
}

fn tightness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_constant: f64 = 0.0;
    for _ in 0..200 {
        let h = (rng.random_range(-5.0f64..2.0)).exp();
        let traj = HazardTrajectory::constant(h).unwrap();
        let grid = uniform_grid(rng.random_range(0.1..20.0) / h, 64).unwrap();
        let r = check_stochastic_order(&traj, &grid).unwrap();
        for g in r.pointwise_gaps {
            worst_constant = worst_constant.max(g.abs());
        }
    }
    let mut worst_origin: f64 = 0.0;
    for _ in 0..1000 {
        let traj = HazardTrajectory::new(random_trajectory(&mut rng, 0)).unwrap();
        let r = check_stochastic_order(&traj, &[0.0]).unwrap();
        worst_origin = worst_origin.max(r.pointwise_gaps[0].abs());
    }
    outcome(
        worst_constant < 1e-12 && worst_origin < 1e-12,
        format!("constant max |gap| = {worst_constant:.2e}, t=0 max |gap| = {worst_origin:.2e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let spec = random_trajectory(&mut rng, 0);
        let traj = HazardTrajectory::new(spec.clone()).unwrap();
        let end = spec.segments.last().unwrap().start + 2.0 / traj.initial_hazard();
        let t = rng.random_range(0.0..end);
        let closed = traj.cumulative_hazard(t).unwrap();
        let oracle = oracle_cumulative(&spec, t);
        if oracle > 0.0 {
            worst = worst.max((closed - oracle).abs() / oracle);
        }
    }
    let weibull = HazardTrajectory::single(HazardForm::Linear {
        intercept: 0.0,
        slope: 2.0,
    })
    .unwrap();
    let mttf = weibull.mean_time_to_failure();
    let quadrature = simpson(&|t: f64| (-t * t).exp(), 0.0, 12.0, 1e-15);
    let half_sqrt_pi = 0.5 * std::f64::consts::PI.sqrt();
    let mttf_err = (mttf - half_sqrt_pi)
        .abs()
        .max((quadrature - half_sqrt_pi).abs());
    outcome(
        worst <= 1e-9 && mttf_err <= 1e-6,
        format!("max rel err {worst:.2e} on 1000; MTTF(2t) = {mttf:.9}, err {mttf_err:.1e}"),
    )
}

fn sampler_law() -> Outcome {
    const N: usize = 100_000;
    const DELTA: f64 = 1e-3;
    let eps = dkw_epsilon(N, DELTA);
    let two = two_sample_threshold(N, N, DELTA);
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, label) in [
        "constant-control",
        "figure1-sawtooth",
        "imperfect-drift",
        "threshold-wearout",
    ]
    .iter()
    .enumerate()
    {
        let traj = build_trajectory(&catalog_scenario(label).unwrap()).unwrap();
        let dist = sample_many(&traj, N, 100 + i as u64).unwrap();
        // Closed-form F; its agreement with quadrature is criterion 4.
        let ks = dist.ks_statistic(|t| traj.failure_cdf(t).unwrap());

        let horizon = 5.0 / traj.initial_hazard();
        let inversion: Vec<f64> = sample_replicates(&traj, N, 200 + i as u64)
            .into_iter()
            .map(|t| if t < horizon { t } else { f64::INFINITY })
            .collect();
        let thinning: Vec<f64> = (0..N as u64)
            .map(|r| {
                sample_failure_time_thinning(&traj, horizon, SeededStream::new(300 + i as u64, r))
                    .unwrap()
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        let ks2 = ks_two_sample(&inversion, &thinning);
        pass &= ks < eps && ks2 < two;
        parts.push(format!("{label} KS {ks:.4} / 2-sample {ks2:.4}"));
    }
    outcome(
        pass,
        format!(
            "{}; eps {eps:.5}, 2-sample threshold {two:.5}",
            parts.join(", ")
        ),
    )
}

fn validator_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut detected = 0;
    let mut total = 0;
    for _ in 0..50 {
        let epochs = rng.random_range(1..4);
        let base = random_trajectory(&mut rng, epochs);
        assert!(validate_trajectory(&base).unwrap().valid);
        for m in ALL_MUTATIONS {
            total += 1;
            let mutated = mutate(&base, m, &mut rng);
            if let Ok(report) = validate_trajectory(&mutated) {
                if !report.valid
                    && report
                        .violations
                        .iter()
                        .any(|v| v.principle.id() == m.principle_id())
                {
                    detected += 1;
                }
            }
        }
    }
    outcome(
        detected == total,
        format!("{detected}/{total} mutations detected"),
    )
}

fn pra_underestimation() -> Outcome {
    let traj = single(HazardForm::Linear {
        intercept: 1.0,
        slope: 2.0,
    });
    let h1 = oracle_cumulative(traj.spec(), 1.0);
    let oracle_gap = -(-h1).exp_m1() - (1.0 - (-1.0f64).exp());
    let gap = check_stochastic_order(&traj, &[1.0])
        .unwrap()
        .pointwise_gaps[0];
    outcome(
        (gap - 0.2325).abs() <= 1e-3 && (gap - oracle_gap).abs() <= 1e-12,
        format!("gap(1) = {gap:.6}, oracle {oracle_gap:.6}"),
    )
}

/// TV(Binomial(n, p), Poisson(np)) by direct enumeration to 40 plus the
/// Poisson tail mass.
fn binomial_poisson_tv(n: u32, p: f64) -> f64 {
    let lambda = n as f64 * p;
    let (mut choose, mut factorial, mut sum, mut mass) = (1.0f64, 1.0f64, 0.0, 0.0);
    for k in 0..=40u32 {
        if k > 0 {
            factorial *= k as f64;
            choose = if k <= n {
                choose * (n - k + 1) as f64 / k as f64
            } else {
                0.0
            };
        }
        let b = if k <= n {
            choose * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
        } else {
            0.0
        };
        let q = (-lambda).exp() * lambda.powi(k as i32) / factorial;
        mass += q;
        sum += (b - q).abs();
    }
    0.5 * (sum + (1.0 - mass).max(0.0))
}

fn stein_chen() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for _ in 0..200 {
        let n = rng.random_range(0..=12);
        let proc =
            DiscretizedFailureProcess::new((0..n).map(|_| rng.random_range(1e-4..0.999)).collect())
                .unwrap();
        let exact = exact_tv_small(&proc, default_support_cap(proc.lambda())).unwrap();
        if exact > stein_chen_tv_bound(&proc) {
            failures += 1;
        }
    }
    let ten = DiscretizedFailureProcess::new(vec![0.1; 10]).unwrap();
    let bound = stein_chen_tv_bound(&ten);
    let exact = exact_tv_small(&ten, default_support_cap(ten.lambda())).unwrap();
    let oracle = binomial_poisson_tv(10, 0.1);
    outcome(
        failures == 0 && (bound - 0.1).abs() < 1e-15 && exact < bound && (exact - oracle).abs() < 1e-12,
        format!("{failures}/200 bound failures; (10, 0.1): bound {bound:.4}, exact {exact:.6}, oracle {oracle:.6}"),
    )
}

fn riskcheck(args: &[&str], out: &Path) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_riskcheck"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("RISKCHECK_SEED")
        .output()
        .expect("binary runs")
        .status
        .code()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let scenario = tmp.path().join("catalog");
    riskcheck(&["catalog"], &scenario);
    let input = scenario.join("imperfect-drift.scenario.json");
    let input = input.to_str().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "8"] {
        let out = tmp.path().join(threads);
        let code = riskcheck(
            &[
                "sample",
                "--input",
                input,
                "--n",
                "100000",
                "--seed",
                "99",
                "--threads",
                threads,
            ],
            &out,
        );
        files.push((code, fs::read(out.join("samples.csv")).unwrap_or_default()));
    }
    let same = files[0].1 == files[1].1 && !files[0].1.is_empty();
    outcome(
        same && files.iter().all(|f| f.0 == Some(0)),
        format!(
            "1 vs 8 threads: {} bytes, identical = {same}",
            files[0].1.len()
        ),
    )
}

fn cli_contract() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("validate", "constant.json", 0),
        ("bound-check", "sawtooth.json", 0),
        ("validate", "wrong_version.json", 2),
        ("validate", "unknown_form.json", 2),
        ("validate", "undeclared_drop.json", 3),
        ("validate", "below_initial.json", 3),
        ("bound-check", "below_initial.json", 4),
    ];
    let mut pass = true;
    let mut seen = Vec::new();
    for (command, file, want) in cases {
        let got = riskcheck(&[command, "--input", &fixture(file)], tmp.path());
        pass &= got == Some(want);
        seen.push(format!("{command} {file} -> {got:?}"));
    }
    // Scenario -> build -> serialize -> rebuild.
    for label in ["figure1-sawtooth", "imperfect-drift", "threshold-wearout"] {
        let traj = build_trajectory(&catalog_scenario(label).unwrap()).unwrap();
        let Ok(Document::Trajectory(spec)) = parse_document(&trajectory_json(traj.spec())) else {
            return outcome(false, format!("{label} did not round-trip"));
        };
        pass &= HazardTrajectory::new(spec).map(|t| t.hash()) == Ok(traj.hash());
    }
    outcome(pass, seen.join("; ") + "; round-trip hashes stable")
}

fn main() {
    let results = [
        criterion(
            1,
            "constant-hazard reliability",
            Some(Duration::from_secs(1)),
            constant_reliability,
        ),
        criterion(
            2,
            "stochastic ordering",
            Some(Duration::from_secs(30)),
            ordering,
        ),
        criterion(3, "tightness", None, tightness),
        criterion(4, "oracle equivalence", None, oracle_equivalence),
        criterion(5, "sampler law", Some(Duration::from_secs(60)), sampler_law),
        criterion(6, "validator completeness", None, validator_completeness),
        criterion(7, "PRA underestimation", None, pra_underestimation),
        criterion(8, "Stein-Chen soundness", None, stein_chen),
        criterion(9, "determinism across threads", None, determinism),
        criterion(10, "CLI contract", None, cli_contract),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
