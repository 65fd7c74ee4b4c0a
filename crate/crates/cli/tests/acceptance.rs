//! Acceptance suite: one check per acceptance criterion, each printing a
//! PASS/FAIL line. Runs without the libtest harness so the lines always
//! show up; exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::panic;
use std::process::{Command, Stdio};
use std::time::Instant;

use stathyp::estat::{exact_e, sampled_e, EstimateRecord, DEFAULT_PAIR_BUDGET};
use stathyp::relhyp::{decompose_counts, poincare_partial, DecompositionParams};
use stathyp::sphere::{
    bfs_sphere_counts, enumerate_sphere, growth_report, sphere_counts, EnumerationLimits, SphereMode, SphereSampler,
    SphereWalker,
};
use stathyp::{GroupSpec, Side};

const Z2_STAR_Z: &str = "free_product(abelian(2),free(1))";

type Check = (u32, &'static str, fn() -> Outcome);

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

fn spec(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

fn limits() -> EnumerationLimits {
    EnumerationLimits::default()
}

fn exact(s: &str, n: u32) -> EstimateRecord {
    let ds = enumerate_sphere(&spec(s), n, SphereMode::Full, limits()).unwrap();
    exact_e(&ds, DEFAULT_PAIR_BUDGET).unwrap()
}

/// Metric oracle: closed-form word length against bidirectional search on
/// every element of a ball.
fn metric_oracle() -> Outcome {
    let families = [
        ("free(2)", 8),
        ("abelian(2)", 8),
        ("free_product(free(1),free(1))", 8),
        ("abelian(3)", 6),
        ("cyclic(7)", 6),
        ("dihedral_inf", 6),
        (Z2_STAR_Z, 6),
        ("direct(free(2),cyclic(3))", 6),
        ("lamplighter(2)", 6),
        ("lamplighter(3)", 6),
    ];
    let mut checked = 0u64;
    let mut mismatches = Vec::new();
    for (s, radius) in families {
        let g = spec(s);
        let id = g.identity();
        let mut walker = SphereWalker::new(&g, limits());
        let mut ball = vec![id.clone()];
        while walker.radius() < radius {
            walker.advance().unwrap();
            ball.extend(walker.layer().cloned());
        }
        for x in &ball {
            let fast = g.word_length(x).unwrap();
            let slow = g.bfs_distance(&id, x, radius as u64).unwrap();
            checked += 1;
            if slow != Some(fast) {
                mismatches.push(format!("{s}: {x:?} fast={fast} bfs={slow:?}"));
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{checked} ball elements over 10 families, {} mismatches {:?}", mismatches.len(), mismatches.first()),
    )
}

fn sphere_exactness() -> Outcome {
    let f2 = sphere_counts(&spec("free(2)"), 10, limits()).unwrap();
    let f2_ok = (1..=10).all(|n| f2[n] == 4 * 3u64.pow(n as u32 - 1));
    let z2 = sphere_counts(&spec("abelian(2)"), 50, limits()).unwrap();
    let z2_ok = (1..=50).all(|n| z2[n] == 4 * n as u64);
    let g = spec("direct(free(2),cyclic(3))");
    let conv = sphere_counts(&g, 6, limits()).unwrap();
    let bfs = bfs_sphere_counts(&g, 6, limits()).unwrap();
    outcome(
        f2_ok && z2_ok && conv == bfs,
        format!("free(2) 4·3^(n-1) n≤10: {f2_ok}; abelian(2) 4n n≤50: {z2_ok}; direct(free(2),cyclic(3)) convolution {conv:?} vs BFS {bfs:?}"),
    )
}

/// Independent model of the infinite dihedral group: maps x ↦ s·x + k with
/// generators x ↦ −x and x ↦ 1 − x, distances by plain BFS.
fn dihedral_oracle(n_max: u32) -> Vec<(u128, f64)> {
    type Map = (i64, i64);
    let compose = |f: Map, g: Map| -> Map { (f.0 * g.0, f.0 * g.1 + f.1) };
    let inverse = |f: Map| -> Map { (f.0, -f.0 * f.1) };
    let gens: [Map; 2] = [(-1, 0), (-1, 1)];
    let reach = 2 * n_max;
    let mut dist: HashMap<Map, u32> = HashMap::from([((1, 0), 0)]);
    let mut frontier = vec![(1, 0)];
    for r in 1..=reach {
        let mut next = Vec::new();
        for f in &frontier {
            for g in gens {
                let h = compose(*f, g);
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(h) {
                    e.insert(r);
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    (1..=n_max)
        .map(|n| {
            let sphere: Vec<Map> = dist.iter().filter(|(_, &d)| d == n).map(|(&f, _)| f).collect();
            let sum: u128 = sphere
                .iter()
                .flat_map(|&x| sphere.iter().map(move |&y| (x, y)))
                .map(|(x, y)| dist[&compose(inverse(x), y)] as u128)
                .sum();
            let pairs = (sphere.len() * sphere.len()) as u128;
            (sum, sum as f64 / (n as f64 * pairs as f64))
        })
        .collect()
}

fn elementary_baseline() -> Outcome {
    let z_ok = (1..=20).all(|n| exact("abelian(1)", n).value == 1.0);
    let oracle = dihedral_oracle(12);
    let mut bad = Vec::new();
    for n in 1..=12u32 {
        let r = exact("dihedral_inf", n);
        let (sum, value) = oracle[n as usize - 1];
        if r.distance_sum != sum || r.value != value {
            bad.push(n);
        }
    }
    outcome(
        z_ok && bad.is_empty(),
        format!("Z: E_n == 1 for n=1..20: {z_ok}; dihedral n=1..12 vs affine-map BFS oracle, mismatches at {bad:?}"),
    )
}

/// Sampled records at `radii` for seeds 1..=3; every lower 95% bound must
/// clear 1.7 and every value must exceed 1.8.
fn sampled_trend(s: &str, radii: [u32; 2]) -> (bool, String) {
    let g = spec(s);
    let sampler = SphereSampler::new(&g, radii[1], limits()).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for n in radii {
        for seed in 1..=3 {
            let r = sampled_e(&sampler, n, 100_000, seed).unwrap();
            let (lo, _) = r.ci().unwrap();
            ok &= r.value > 1.8 && lo > 1.7;
            lines.push(format!("n={n} seed={seed}: {:.4}±{:.4}", r.value, r.ci95.unwrap()));
        }
    }
    (ok, lines.join(", "))
}

fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

fn free_product_trend() -> Outcome {
    let f2: Vec<f64> = (2..=6).map(|n| exact("free(2)", n).value).collect();
    // |S_6|² ≈ 7.0e7 fits the default pair budget, |S_7|² ≈ 1.25e9 does not.
    let zz: Vec<f64> = (2..=6).map(|n| exact(Z2_STAR_Z, n).value).collect();
    let (f2_sampled, f2_detail) = sampled_trend("free(2)", [40, 50]);
    let (zz_sampled, zz_detail) = sampled_trend(Z2_STAR_Z, [40, 50]);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" ");
    outcome(
        strictly_increasing(&f2) && strictly_increasing(&zz) && f2_sampled && zz_sampled,
        format!(
            "exact free(2) n=2..6 [{}]; exact Z²*Z n=2..6 [{}]; sampled free(2) {f2_detail}; sampled Z²*Z {zz_detail}",
            fmt(&f2),
            fmt(&zz)
        ),
    )
}

fn plateau() -> Outcome {
    let [e10, e20, e40] = [10, 20, 40].map(|n| exact("abelian(2)", n).value);
    outcome(
        (e40 - e20).abs() < 0.02 && e40 < 1.7,
        format!("abelian(2): E_10={e10} E_20={e20} E_40={e40}"),
    )
}

fn direct_product_trend() -> Outcome {
    let (ok, detail) = sampled_trend("direct(free(2),cyclic(3))", [40, 50]);
    outcome(ok, format!("direct(free(2),cyclic(3)) {detail}"))
}

fn decomposition() -> Outcome {
    let g = spec(Z2_STAR_Z);
    let mut partition = true;
    let mut crux = true;
    let mut theta = true;
    let mut lines = Vec::new();
    for n in [10, 12] {
        let top = (0.4 * n as f64).floor() as u32;
        let profiles: Vec<_> = (2..=top)
            .map(|r| decompose_counts(&g, n, DecompositionParams::new(0.4, r), limits()).unwrap())
            .collect();
        partition &= profiles.iter().all(|p| p.partition_holds());
        crux &= profiles.windows(2).all(|w| w[1].deep_ratio <= w[0].deep_ratio);
        theta &= profiles.windows(2).all(|w| w[1].theta <= w[0].theta);
        lines.push(format!(
            "n={n}: deep ratio [{}], θ [{}]",
            profiles.iter().map(|p| format!("{:.3e}", p.deep_ratio)).collect::<Vec<_>>().join(" "),
            profiles.iter().map(|p| format!("{:.4}", p.theta)).collect::<Vec<_>>().join(" "),
        ));
    }
    outcome(
        partition && crux && theta,
        format!(
            "partition exact: {partition}; deep ratio nonincreasing in R: {crux}; θ nonincreasing in R: {theta}; {}",
            lines.join("; ")
        ),
    )
}

fn poincare() -> Outcome {
    let g = spec(Z2_STAR_Z);
    let s = growth_report(&g, 12, limits()).unwrap().nu_hat;
    let r = poincare_partial(&g, Side::Left, s, 400, limits()).unwrap();
    let flat = r.partial_sums[400] - r.partial_sums[200];
    let x = (-s).exp();
    let worst = (1..=400usize)
        .map(|n| {
            let nf = n as f64;
            let closed = 4.0 * x * (1.0 - (nf + 1.0) * x.powi(n as i32) + nf * x.powi(n as i32 + 1)) / (1.0 - x).powi(2);
            (r.partial_sums[n] - closed).abs()
        })
        .fold(0.0, f64::max);
    outcome(
        flat < 1e-3 && worst < 1e-9,
        format!("s = ν̂ = {s:.6}; A_400 − A_200 = {flat:e}; max |A_N − closed form| over N ≤ 400 = {worst:e}"),
    )
}

fn growth_sandwich() -> Outcome {
    let mut ok = true;
    let mut lines = Vec::new();
    for s in ["free(2)", "free_product(free(1),free(1))"] {
        let r = growth_report(&spec(s), 10, limits()).unwrap();
        let (lo, hi) = r.sandwich_range(2, 10);
        ok &= lo >= 1.0 && hi <= 4.0;
        lines.push(format!("{s}: ν̂={:.6}, ratio range [{lo:.6}, {hi:.6}]", r.nu_hat));
    }
    outcome(ok, lines.join("; "))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |group: &str, radii: &str, threads: u32| -> (Vec<u8>, Vec<u8>) {
        let out = dir.path().join(format!("{}_{threads}.csv", group.len()));
        let status = Command::new(env!("CARGO_BIN_EXE_stathyp"))
            .args(["estimate", "--group", group, "--n", radii, "--samples", "20000", "--seed", "11"])
            .args(["--pairs", "1000000", "--threads", &threads.to_string(), "--out"])
            .arg(&out)
            .stderr(Stdio::null())
            .status()
            .unwrap();
        assert!(status.success());
        (std::fs::read(&out).unwrap(), std::fs::read(out.with_extension("dat")).unwrap())
    };
    let mut ok = true;
    let mut lines = Vec::new();
    for (group, radii) in [(Z2_STAR_Z, "3,6,20"), ("direct(free(2),cyclic(3))", "4,12"), ("lamplighter(2)", "9")] {
        let one = run(group, radii, 1);
        let four = run(group, radii, 4);
        let same = one == four;
        ok &= same;
        lines.push(format!("{group} --n {radii}: {}", if same { "identical" } else { "DIFFERENT" }));
    }
    outcome(ok, format!("estimate CSV + .dat with --threads 1 vs 4: {}", lines.join("; ")))
}

fn main() {
    let criteria: [Check; 10] = [
        (1, "metric oracle", metric_oracle),
        (2, "sphere exactness", sphere_exactness),
        (3, "elementary baseline", elementary_baseline),
        (4, "free-product trend", free_product_trend),
        (5, "abelian plateau", plateau),
        (6, "direct-product trend", direct_product_trend),
        (7, "decomposition identities", decomposition),
        (8, "Poincaré convergence", poincare),
        (9, "growth sandwich", growth_sandwich),
        (10, "determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} [{name}]: {verdict} ({:.1}s) — {}",
            start.elapsed().as_secs_f64(),
            result.detail
        );
        if !result.pass {
            failed.push(id);
        }
    }
    println!(
        "acceptance: {}/{} criteria passed{}",
        criteria.len() - failed.len(),
        criteria.len(),
        if failed.is_empty() { String::new() } else { format!("; failing: {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}

