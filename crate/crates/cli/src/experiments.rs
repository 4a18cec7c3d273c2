use std::time::Instant;

use liegrowth::arith::PrimeField;
use liegrowth::forms::{FiniteForm, FormDescriptor};
use liegrowth::growth::{ball, diameter, Ball, FiniteAmbient, GrowthError, WittProcedure, DENSE_LIMIT};
use liegrowth::lie::{chevalley_algebra_over, LieAlgebra};
use liegrowth::roots::RootSystem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::CliError;

/// Independent stream for trial `t` at prime `p`; parallel and sequential
/// runs draw the same values.
pub fn trial_rng(seed: u64, p: u64, t: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&p.to_le_bytes());
    key[16..24].copy_from_slice(&t.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

#[derive(Debug, Clone)]
pub struct RandomPairConfig {
    pub form: FormDescriptor,
    pub primes: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
    /// Exact diameters for the first this many generating trials at each `p`.
    pub diameter_samples: usize,
    /// Radius of the measured ball is `⌊c ln p⌋`.
    pub ball_constant: f64,
    pub ball_cutoff: u128,
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub p: u64,
    pub trial: usize,
    pub generated: bool,
    pub diameter: Option<usize>,
    pub ball_radius: usize,
    /// `|A^r|`, absent when the cutoff was hit.
    pub ball_size: Option<u128>,
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeSummary {
    pub p: u64,
    pub trials: usize,
    pub generated: usize,
    pub rate: f64,
    pub diameters: Vec<usize>,
    /// Set when `|g|` exceeds the dense limit and only balls were measured.
    pub diameter_note: Option<String>,
    pub max_diameter_over_log_p: Option<f64>,
    /// `min ln|A^r| / ln p` over trials that stayed under the cutoff.
    pub min_ball_exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomPairSummary {
    pub form: String,
    pub seed: u64,
    pub per_prime: Vec<PrimeSummary>,
    /// `max diameter / ln p` over all measured diameters.
    pub fitted_c: Option<f64>,
}

/// The split algebra over F_p, or the fixed points of the twisted form.
pub fn algebra_for(form: &FormDescriptor, p: u64) -> Result<LieAlgebra<PrimeField>, CliError> {
    if form.is_split() {
        let f = PrimeField::new(p).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(chevalley_algebra_over(&form.rs, f))
    } else {
        let ff = FiniteForm::new(form, p).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(ff.algebra().clone())
    }
}

fn one_trial(cfg: &RandomPairConfig, g: &LieAlgebra<PrimeField>, p: u64, t: usize, exact: bool) -> Result<PairRecord, CliError> {
    let start = Instant::now();
    let mut rng = trial_rng(cfg.seed, p, t as u64);
    let a = vec![g.random_vector(&mut rng), g.random_vector(&mut rng)];
    let generated = g.generates(&a);
    let radius = (cfg.ball_constant * (p as f64).ln()).floor().max(1.0) as usize;
    let ball_size = match ball(g, &a, radius, Some(cfg.ball_cutoff)) {
        Ok(b) => Some(b.total()),
        Err(GrowthError::CutoffExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let diameter = if generated && exact { Some(diameter(g, &a)?) } else { None };
    Ok(PairRecord {
        p,
        trial: t,
        generated,
        diameter,
        ball_radius: radius,
        ball_size,
        elapsed_ms: cfg.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

pub fn random_pair_experiment(cfg: &RandomPairConfig) -> Result<(Vec<PairRecord>, RandomPairSummary), CliError> {
    if cfg.trials == 0 {
        return Err(CliError::Config("trial count must be at least 1".into()));
    }
    let mut records = Vec::new();
    let mut per_prime = Vec::new();
    for &p in &cfg.primes {
        let g = algebra_for(&cfg.form, p)?;
        let size = (p as u128).checked_pow(g.dim() as u32);
        let dense = size.is_some_and(|s| s <= DENSE_LIMIT);
        // generation is decided first so the diameter subsample is fixed by the seed alone
        let generated: Vec<bool> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(cfg.seed, p, t as u64);
                let a = vec![g.random_vector(&mut rng), g.random_vector(&mut rng)];
                g.generates(&a)
            })
            .collect();
        let mut exact = vec![false; cfg.trials];
        if dense {
            for t in (0..cfg.trials).filter(|&t| generated[t]).take(cfg.diameter_samples) {
                exact[t] = true;
            }
        }
        let recs: Vec<PairRecord> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| one_trial(cfg, &g, p, t, exact[t]))
            .collect::<Result<_, _>>()?;
        let ln_p = (p as f64).ln();
        let diameters: Vec<usize> = recs.iter().filter_map(|r| r.diameter).collect();
        let n_gen = recs.iter().filter(|r| r.generated).count();
        per_prime.push(PrimeSummary {
            p,
            trials: cfg.trials,
            generated: n_gen,
            rate: n_gen as f64 / cfg.trials as f64,
            max_diameter_over_log_p: diameters.iter().max().map(|&d| d as f64 / ln_p),
            diameters,
            diameter_note: (!dense).then(|| format!("|g| = {p}^{} exceeds 2^24; ball sizes only", g.dim())),
            min_ball_exponent: recs
                .iter()
                .filter_map(|r| r.ball_size)
                .map(|s| (s as f64).ln() / ln_p)
                .min_by(f64::total_cmp),
        });
        records.extend(recs);
    }
    let fitted_c = per_prime.iter().filter_map(|s| s.max_diameter_over_log_p).max_by(f64::total_cmp);
    let summary = RandomPairSummary { form: cfg.form.label(), seed: cfg.seed, per_prime, fitted_c };
    Ok((records, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WittRecord {
    pub p: u64,
    /// Exact diameter of `{e_{-1}, e_2}`, computed for `p <= 7`.
    pub diameter: Option<usize>,
    /// Largest expression weight over the checked elements.
    pub max_atoms: usize,
    pub elements_checked: usize,
    pub exhaustive: bool,
    /// `max_atoms / (p ln p)`.
    pub ratio: f64,
    pub line0_atoms: usize,
    /// `line0_atoms / ln p`.
    pub line0_ratio: f64,
}

/// Largest `p` at which every element of W(p) is expressed.
pub const WITT_EXHAUSTIVE_LIMIT: u64 = 5;

pub fn witt_experiment(primes: &[u64], samples: usize, seed: u64) -> Result<Vec<WittRecord>, CliError> {
    primes
        .iter()
        .map(|&p| {
            if p < 5 {
                return Err(CliError::Config(format!("W(p) needs p >= 5, got {p}")));
            }
            let w = WittProcedure::new(p)?;
            let g = w.algebra();
            let exhaustive = p <= WITT_EXHAUSTIVE_LIMIT;
            let (max_atoms, checked) = if exhaustive {
                let amb = FiniteAmbient::new(g)?;
                let n = amb.size() as u64;
                let m = (0..n).into_par_iter().map(|c| w.express(&amb.decode(c)).weight()).max().unwrap_or(0);
                (m, n as usize)
            } else {
                let worst = vec![p - 1; p as usize];
                let m = (0..samples as u64)
                    .into_par_iter()
                    .map(|t| w.express(&g.random_vector(&mut trial_rng(seed, p, t))).weight())
                    .chain(rayon::iter::once(w.express(&worst).weight()))
                    .max()
                    .unwrap_or(0);
                (m, samples + 1)
            };
            let diameter = if p <= 7 {
                let mut b = Ball::new(FiniteAmbient::new(g)?, &w.generators(), None, false);
                while b.grow()? {}
                Some(b.depth())
            } else {
                None
            };
            let line0_atoms = (1..p).filter_map(|a| w.line(0, a)).map(|e| e.weight()).max().unwrap_or(0);
            let ln_p = (p as f64).ln();
            Ok(WittRecord {
                p,
                diameter,
                max_atoms,
                elements_checked: checked,
                exhaustive,
                ratio: max_atoms as f64 / (p as f64 * ln_p),
                line0_atoms,
                line0_ratio: line0_atoms as f64 / ln_p,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub p: u64,
    pub samples: usize,
    pub sl2_four_variable_violations: usize,
    pub sl2_two_variable_violations: usize,
    /// Index of the first sampled pair in sl3 where the two-variable form is nonzero.
    pub sl3_first_violation: Option<usize>,
    pub zero_input_vanishes: bool,
}

/// `[[[x2, x3], [x4, x1]], x1] + [[[x2, x1], [x3, x1]], x4]`.
pub fn four_variable_form(g: &LieAlgebra<PrimeField>, x: [&[u64]; 4]) -> Vec<u64> {
    let [x1, x2, x3, x4] = x;
    let b = |a: &[u64], c: &[u64]| g.bracket(a, c);
    let t1 = b(&b(&b(x2, x3), &b(x4, x1)), x1);
    let t2 = b(&b(&b(x2, x1), &b(x3, x1)), x4);
    g.add(&t1, &t2)
}

/// The four-variable form at `x_i = [X, Y, …, Y]` with `i - 1` copies of `Y`
/// (left-normed), homogeneous of degree 11.
pub fn two_variable_form(g: &LieAlgebra<PrimeField>, x: &[u64], y: &[u64]) -> Vec<u64> {
    let mut xs = vec![x.to_vec()];
    for i in 1..4 {
        xs.push(g.bracket(&xs[i - 1], y));
    }
    four_variable_form(g, [&xs[0], &xs[1], &xs[2], &xs[3]])
}

pub fn identity_check_experiment(p: u64, samples: usize, seed: u64) -> Result<IdentityReport, CliError> {
    if p <= 2 {
        return Err(CliError::Config(format!("identity check needs p > 2, got {p}")));
    }
    let f = PrimeField::new(p).map_err(|e| CliError::Config(e.to_string()))?;
    let sl2 = chevalley_algebra_over(&"A1".parse::<RootSystem>()?, f);
    let sl3 = chevalley_algebra_over(&"A2".parse::<RootSystem>()?, f);
    let four = (0..samples as u64)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = trial_rng(seed, p, t);
            let x: Vec<Vec<u64>> = (0..4).map(|_| sl2.random_vector(&mut rng)).collect();
            !sl2.is_zero(&four_variable_form(&sl2, [&x[0], &x[1], &x[2], &x[3]]))
        })
        .count();
    let pair_violates = |g: &LieAlgebra<PrimeField>, t: u64| {
        let mut rng = trial_rng(seed ^ 0x5eed, p, t);
        let x = g.random_vector(&mut rng);
        let y = g.random_vector(&mut rng);
        !g.is_zero(&two_variable_form(g, &x, &y))
    };
    let two = (0..samples as u64).into_par_iter().filter(|&t| pair_violates(&sl2, t)).count();
    let sl3_first_violation = (0..samples as u64).find(|&t| pair_violates(&sl3, t)).map(|t| t as usize);
    let z = sl2.zero();
    let zero_input_vanishes = sl2.is_zero(&two_variable_form(&sl2, &z, &z))
        && sl2.is_zero(&four_variable_form(&sl2, [&z, &z, &z, &z]));
    Ok(IdentityReport {
        p,
        samples,
        sl2_four_variable_violations: four,
        sl2_two_variable_violations: two,
        sl3_first_violation,
        zero_input_vanishes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn trial_streams_are_distinct_and_stable() {
        let a: u64 = trial_rng(1, 7, 0).gen();
        let b: u64 = trial_rng(1, 7, 1).gen();
        let c: u64 = trial_rng(1, 11, 0).gen();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, trial_rng(1, 7, 0).gen::<u64>());
    }

    #[test]
    fn two_variable_form_has_degree_eleven() {
        let g = algebra_for(&"A1".parse().unwrap(), 101).unwrap();
        let mut rng = trial_rng(3, 101, 0);
        let x = g.random_vector(&mut rng);
        let y = g.random_vector(&mut rng);
        let base = two_variable_form(&g, &x, &y);
        // five X's and six Y's
        let v = two_variable_form(&g, &g.scale(&2, &x), &g.scale(&3, &y));
        let c = (32 * 729) % 101;
        assert_eq!(v, g.scale(&c, &base));
    }

    #[test]
    fn small_random_pair_run() {
        let cfg = RandomPairConfig {
            form: "A1".parse().unwrap(),
            primes: vec![7, 11],
            trials: 20,
            seed: 5,
            diameter_samples: 3,
            ball_constant: 1.0,
            ball_cutoff: 1 << 16,
            timing: false,
        };
        let (recs, summary) = random_pair_experiment(&cfg).unwrap();
        assert_eq!(recs.len(), 40);
        for s in &summary.per_prime {
            assert!(s.diameters.len() <= 3);
            assert!(s.rate > 0.5);
        }
        assert!(recs.iter().all(|r| r.diameter.is_none() || r.generated));
        let (again, _) = random_pair_experiment(&cfg).unwrap();
        assert_eq!(recs, again);
    }
}
