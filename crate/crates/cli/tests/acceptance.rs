//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails for a reason other than a recorded conflict.

use std::collections::HashSet;
use std::process::Command;
use std::time::Instant;

use liegrowth::arith::{PrimeField, Rationals};
use liegrowth::extremal::{extremal_basis_pipeline, sl_n_even_index_case, ElementClass};
use liegrowth::forms::{Covering, FiniteForm, FormDescriptor};
use liegrowth::growth::{diameter, towers, Ball, FiniteAmbient, LatticeBall};
use liegrowth::lie::{chevalley_algebra, chevalley_algebra_over, witt_algebra, LieAlgebra};
use liegrowth::numfields::{density_scan, gaussian_period_polynomial};
use liegrowth::roots::{DiagramAutomorphism, RootSystem, RootType};
use liegrowth_cli::experiments::{identity_check_experiment, random_pair_experiment, trial_rng, RandomPairConfig};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the only failing part is a documented conflict between the
    /// criterion text and exact computation.
    conflict: Option<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into(), conflict: None }
    }
}

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn sl2(p: u64) -> LieAlgebra<PrimeField> {
    chevalley_algebra_over(&"A1".parse().unwrap(), fp(p))
}

fn sl3(p: u64) -> LieAlgebra<PrimeField> {
    chevalley_algebra_over(&"A2".parse().unwrap(), fp(p))
}

fn random_generating_set(g: &LieAlgebra<PrimeField>, size: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    for _ in 0..10_000 {
        let a: Vec<Vec<u64>> = (0..size).map(|_| g.random_vector(rng)).collect();
        if g.generates(&a) {
            return a;
        }
    }
    panic!("no generating set of size {size} found");
}

/// Values of all expressions with at most `k` leaves from `{0} ∪ a`, by
/// direct enumeration of sums and brackets of smaller expressions.
fn brute_force_balls(g: &LieAlgebra<PrimeField>, a: &[Vec<u64>], k: usize) -> Vec<HashSet<Vec<u64>>> {
    let mut balls: Vec<HashSet<Vec<u64>>> = vec![HashSet::new()];
    let first: HashSet<Vec<u64>> = std::iter::once(g.zero()).chain(a.iter().cloned()).collect();
    balls.push(first);
    for n in 2..=k {
        let mut next = balls[n - 1].clone();
        for i in 1..n {
            for x in &balls[i] {
                for y in &balls[n - i] {
                    next.insert(g.add(x, y));
                    next.insert(g.bracket(x, y));
                }
            }
        }
        balls.push(next);
    }
    balls
}

// 1

fn structure_constants() -> Outcome {
    let start = Instant::now();
    let table: [(RootType, usize, usize); 11] = [
        (RootType::A, 1, 2),
        (RootType::A, 2, 6),
        (RootType::A, 3, 12),
        (RootType::A, 4, 20),
        (RootType::B, 2, 8),
        (RootType::B, 3, 18),
        (RootType::B, 4, 32),
        (RootType::C, 3, 18),
        (RootType::C, 4, 32),
        (RootType::D, 4, 24),
        (RootType::G, 2, 12),
    ];
    let mut bad = Vec::new();
    for (kind, n, roots) in table {
        let rs = RootSystem::new(kind, n).unwrap();
        let label = rs.label();
        if rs.num_roots() != roots {
            bad.push(format!("{label}: {} roots", rs.num_roots()));
        }
        let gq = chevalley_algebra_over(&rs, Rationals);
        if gq.check_antisymmetry().is_err() || gq.check_jacobi().is_err() {
            bad.push(format!("{label} over Q"));
        }
        let gz = chevalley_algebra(&rs);
        if gz.check_antisymmetry().is_err() || gz.check_jacobi().is_err() {
            bad.push(format!("{label} over Z"));
        }
        for p in [5, 7, 11] {
            let g = chevalley_algebra_over(&rs, fp(p));
            if g.check_antisymmetry().is_err() || g.check_jacobi().is_err() {
                bad.push(format!("{label} over F_{p}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(bad.is_empty() && secs < 60.0, format!("11 types over Q, Z, F_5, F_7, F_11, {} failures {bad:?}, {secs:.1}s < 60s", bad.len()))
}

// 2

fn steinberg_sign() -> Outcome {
    let rs: RootSystem = "A2".parse().unwrap();
    let theta = DiagramAutomorphism::standard(&rs, 2).unwrap();
    let g = chevalley_algebra(&rs);
    let top = rs.highest_root();
    let e13 = g.basis(top);
    let image = theta.signed_permutation().apply(g.ring(), &e13);
    let ok = image == g.neg(&e13);
    Outcome::new(ok, format!("theta({}) = {}", g.labels()[top], g.format_vector(&image)))
}

// 3

fn forms_dimension() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (label, dim) in [("2A2", 8), ("2A3", 15), ("2D4", 28), ("3D4", 28)] {
        let form: FormDescriptor = label.parse().unwrap();
        let field = Covering::default_field(form.order());
        let primes: Vec<u64> = (5..).filter(|&p| liegrowth::arith::is_prime(p) && field.is_inert(p)).take(3).collect();
        for &p in &primes {
            let ff = FiniteForm::new(&form, p).unwrap();
            let good = ff.kernel_dim() == dim && ff.algebra().dim() == dim && ff.theta().verify(ff.ambient()).is_ok();
            ok &= good;
        }
        lines.push(format!("{label}:{dim}@{primes:?}"));
    }
    Outcome::new(ok, lines.join(" "))
}

// 4

fn ball_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut discrepancies = 0;
    let algebras = [("sl2(F_3)", sl2(3)), ("W(5)", witt_algebra(5).unwrap())];
    for (_, g) in &algebras {
        for _ in 0..25 {
            let a = vec![g.random_vector(&mut rng), g.random_vector(&mut rng)];
            let oracle = brute_force_balls(g, &a, 5);
            let mut ball = Ball::new(FiniteAmbient::new(g).unwrap(), &a, None, false);
            ball.grow_to(5).unwrap();
            for (k, expected) in oracle.iter().enumerate().skip(1) {
                let got: HashSet<Vec<u64>> = ball.layer(k).into_iter().collect();
                if &got != expected {
                    discrepancies += 1;
                }
            }
        }
    }
    Outcome::new(discrepancies == 0, format!("2 algebras x 25 sets x k <= 5, {discrepancies} discrepancies"))
}

// 5

fn full_line_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut violations = 0;
    let mut skipped = 0;
    let mut covers = 0;
    let mut worst = 0.0f64;
    // sl3(F_3) is not generated by two elements, so its sets have three
    for (g, size) in [(sl2(5), 2), (sl3(3), 3)] {
        let p = g.ring().p();
        let d = g.dim();
        for _ in 0..100 {
            let a = random_generating_set(&g, size, &mut rng);
            let mut ball = Ball::new(FiniteAmbient::new(&g).unwrap(), &a, None, true);
            while ball.grow().unwrap() {}
            let diam = ball.depth();
            let Some(k) = (1..=diam).find(|&k| ball.line_stat(k).ell == p) else {
                skipped += 1;
                continue;
            };
            let bound = k * d + d * d;
            worst = worst.max(diam as f64 / bound as f64);
            if diam > bound {
                violations += 1;
            }
            let v = ball.line_stat(k).direction;
            for _ in 0..3 {
                let u = g.random_vector(&mut rng);
                match ball.cover_from_line(&g, k, &v, &u) {
                    Ok(e) if e.evaluate(&g) == u && e.leaves_in(&a) && e.weight() <= bound => covers += 1,
                    _ => violations += 1,
                }
            }
        }
    }
    Outcome::new(
        violations == 0,
        format!("{violations} violations, {covers} covers verified, {skipped} sets without a full line, max diam/bound {worst:.2}"),
    )
}

// 6

fn tower_spans() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = 0;
    for g in [sl2(7), sl3(5), witt_algebra(5).unwrap()] {
        let d = g.dim();
        for _ in 0..100 {
            let a = random_generating_set(&g, 2, &mut rng);
            let b = loop {
                let b = g.random_vector(&mut rng);
                if !g.is_zero(&b) {
                    break b;
                }
            };
            let t = towers(&g, &a, d, Some(&[b]), 1 << 22).unwrap();
            if t.spans.iter().enumerate().any(|(k, &s)| s < k.min(d)) || t.relative_spans[d] != d {
                violations += 1;
            }
        }
    }
    Outcome::new(violations == 0, format!("300 instances, {violations} violations"))
}

// 7

fn entry_bound() -> Outcome {
    let g = chevalley_algebra(&"A1".parse().unwrap());
    let s: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| i64::from(i == j)).collect()).collect();
    let mut ball = LatticeBall::new(&g, &s, 1 << 24, None).unwrap();
    ball.grow_to(6).unwrap();
    let mut ok = true;
    let mut norms = Vec::new();
    for m in 1..=6u32 {
        let n = BigInt::from(ball.norm(m as usize));
        ok &= n <= BigInt::from(18).pow(m - 1);
        norms.push(n.to_string());
    }
    // |S^m| >= 2^{m/2} as |S^m|^2 >= 2^m; once |S^m| >= 64 every m <= 12 follows by monotonicity
    let mut sizes = Vec::new();
    let mut m = 1;
    loop {
        if ball.depth() < m {
            ball.grow().unwrap();
        }
        let size = ball.layer_size(m) as u128;
        sizes.push(size);
        ok &= size * size >= 1u128 << m;
        if size >= 64 || m == 12 {
            break;
        }
        m += 1;
    }
    Outcome::new(ok, format!("norms {norms:?} vs 18^(m-1); sizes {sizes:?} reach 64 at m = {m}"))
}

// 8

fn extremal_pipeline() -> Outcome {
    let golden = Covering::default_field(2);
    let mut runs = 0;
    let mut failures = Vec::new();
    for label in ["A1", "A2", "2A2", "2A3", "2D4"] {
        let form: FormDescriptor = label.parse().unwrap();
        for p in (7..=50).filter(|&p| liegrowth::arith::is_prime(p)) {
            if !form.is_split() && !golden.is_inert(p) {
                continue;
            }
            runs += 1;
            let ff = FiniteForm::new(&form, p).unwrap();
            let g = ff.algebra();
            let good = match extremal_basis_pipeline(&form, p) {
                Ok(c) => {
                    c.verify(g)
                        && c.basis.len() == g.dim()
                        && c.basis.iter().all(|b| b.class == ElementClass::Extremal)
                        && c.basis.iter().all(|b| b.q_witness.is_some() || b.element.vector == c.y)
                }
                Err(_) => false,
            };
            if !good {
                failures.push(format!("{label}@{p}"));
            }
        }
    }
    let pipeline_ok = failures.is_empty();
    // even-index case in the 4x4 matrix model, even and odd i
    let mut shortcut_reproduced = true;
    let mut literal_zero = true;
    for p in [7, 11, 13] {
        for i in 2..4 {
            let r = sl_n_even_index_case(4, p, i).unwrap();
            shortcut_reproduced &= r.z_in_l1 && r.u_matches && r.shortcut_fails == (i % 2 == 0);
            if i % 2 == 0 {
                literal_zero &= r.q_vanishes;
            }
        }
    }
    let detail = format!(
        "{runs} pipeline runs, {} failures; even-index case: shortcut witnesses x, [b,y] vanish for even i only = {shortcut_reproduced}, q_(y,b) identically 0 = {literal_zero}",
        failures.len()
    );
    let pass = pipeline_ok && shortcut_reproduced && literal_zero;
    let conflict = (pipeline_ok && shortcut_reproduced && !literal_zero).then(|| {
        "exact computation gives q_(y,b) nonzero on the algebra for the even-index element; only the standard witnesses vanish".to_string()
    });
    Outcome { pass, detail, conflict }
}

// 9

fn number_fields() -> Outcome {
    let start = Instant::now();
    let big = |c: &[i64]| c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let f5 = gaussian_period_polynomial(5, 2).unwrap();
    let f7 = gaussian_period_polynomial(7, 3).unwrap();
    let f13 = gaussian_period_polynomial(13, 2).unwrap();
    let exact = f5.poly == big(&[-1, 1, 1]) && f7.poly == big(&[-1, -2, 1, 1]);
    let quad = density_scan(&[f5.poly.clone()], 100_000).densities[0];
    let cubic = density_scan(&[f7.poly.clone()], 100_000).densities[0];
    let union = density_scan(&[f5.poly, f13.poly], 100_000);
    let secs = start.elapsed().as_secs_f64();
    let ok = exact
        && (quad - 0.5).abs() <= 0.02
        && (cubic - 2.0 / 3.0).abs() <= 0.02
        && union.predicted_union == Some(0.75)
        && (union.union_density - 0.75).abs() <= 0.02
        && secs < 120.0;
    Outcome::new(
        ok,
        format!("polys exact = {exact}; densities {quad:.4}, {cubic:.4}, union {:.4}; {secs:.1}s < 120s", union.union_density),
    )
}

// 10

fn random_pairs() -> Outcome {
    let cfg = RandomPairConfig {
        form: "A1".parse().unwrap(),
        primes: vec![101, 211, 401, 809, 1009],
        trials: 500,
        seed: 2024,
        diameter_samples: 3,
        ball_constant: 1.0,
        ball_cutoff: 1 << 20,
        timing: false,
    };
    let (_, summary) = random_pair_experiment(&cfg).unwrap();
    let xs: Vec<f64> = summary.per_prime.iter().map(|s| (s.p as f64).ln()).collect();
    let ys: Vec<f64> = summary.per_prime.iter().map(|s| s.rate).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let rates_ok = ys.iter().all(|&r| r >= 0.98);
    let trend_ok = slope >= 0.0 && ys[ys.len() - 1] >= ys[0];
    let c = summary.fitted_c;
    let ok = rates_ok && trend_ok && c.is_some_and(f64::is_finite);
    Outcome::new(ok, format!("rates {ys:?}, slope vs ln p {slope:.4}, fitted C = {:.3}", c.unwrap_or(f64::NAN)))
}

// 11

fn identity_remark() -> Outcome {
    let r = identity_check_experiment(101, 10_000, 11).unwrap();
    let ok = r.sl2_two_variable_violations == 0
        && r.sl2_four_variable_violations == 0
        && r.sl3_first_violation.is_some()
        && r.zero_input_vanishes;
    Outcome::new(
        ok,
        format!(
            "sl2: {} + {} violations in 10^4; sl3 violation at sample {:?}",
            r.sl2_four_variable_violations, r.sl2_two_variable_violations, r.sl3_first_violation
        ),
    )
}

// 12

const SL2_DIAMETERS: [(u64, usize); 5] = [(3, 6), (5, 7), (7, 8), (11, 10), (13, 11)];

fn exact_diameters() -> Outcome {
    let mut got = Vec::new();
    for (p, _) in SL2_DIAMETERS {
        let g = sl2(p);
        got.push(diameter(&g, &[g.basis(0), g.basis(1)]).unwrap());
    }
    let g = sl2(3);
    let balls = brute_force_balls(&g, &[g.basis(0), g.basis(1)], 8);
    let oracle = balls.iter().position(|b| b.len() == 27);
    let frozen: Vec<usize> = SL2_DIAMETERS.iter().map(|&(_, d)| d).collect();
    let ok = got == frozen && oracle == Some(frozen[0]);
    Outcome::new(ok, format!("diameters {got:?} (frozen {frozen:?}), enumeration oracle at p = 3: {oracle:?}"))
}

// 13

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 5] = [
        &["random-pairs", "--type", "A1", "--p", "53,101", "--trials", "40", "--diameter-samples", "1", "--seed", "9"],
        &["random-pairs", "--type", "A2", "--twist", "2", "--p", "7", "--trials", "10", "--diameter-samples", "0", "--seed", "9", "--format", "json"],
        &["witt", "--p", "5,7,11", "--samples", "50", "--seed", "3"],
        &["identity", "--p", "101", "--samples", "300", "--seed", "3"],
        &["chebotarev", "--q", "5,13", "--bound", "20000"],
    ];
    let mut identical = 0;
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("run{i}_{rep}"));
            let status = Command::new(env!("CARGO_BIN_EXE_liegrowth"))
                .args(*args)
                .arg("--out")
                .arg(&path)
                .output()
                .map(|o| o.status.success())
                .unwrap_or(false);
            outputs.push((status, std::fs::read(&path).unwrap_or_default()));
        }
        if outputs[0].0 && outputs[0] == outputs[1] && !outputs[0].1.is_empty() {
            identical += 1;
        }
    }
    // the per-trial streams do not depend on the order trials are visited
    let a: Vec<u64> = (0..4).map(|t| rand::Rng::gen(&mut trial_rng(1, 7, t))).collect();
    let b: Vec<u64> = (0..4).rev().map(|t| rand::Rng::gen(&mut trial_rng(1, 7, t))).rev().collect();
    let ok = identical == runs.len() && a == b;
    Outcome::new(ok, format!("{identical}/{} experiments byte-identical on rerun", runs.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 13] = [
        (1, "structure constants", structure_constants),
        (2, "Steinberg sign anchor", steinberg_sign),
        (3, "form dimensions and twist", forms_dimension),
        (4, "ball oracle", ball_oracle),
        (5, "full line bound", full_line_bound),
        (6, "tower spans", tower_spans),
        (7, "entry bound in sl2(Z)", entry_bound),
        (8, "extremal pipeline", extremal_pipeline),
        (9, "number fields", number_fields),
        (10, "random pairs", random_pairs),
        (11, "identity remark", identity_remark),
        (12, "exact diameters", exact_diameters),
        (13, "determinism", determinism),
    ];
    let mut hard_failures = 0;
    for (n, name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict} {name} [{secs:.1}s]: {}", o.detail);
        if !o.pass {
            match o.conflict {
                Some(reason) => println!("             recorded conflict: {reason}"),
                None => hard_failures += 1,
            }
        }
    }
    if hard_failures > 0 {
        println!("{hard_failures} criteria failed");
        std::process::exit(1);
    }
}
