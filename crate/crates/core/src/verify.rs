//! The twelve acceptance checks, shared by the `acceptance` test target and
//! the `verify-all` command.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{
    cell_jacobian_rank, flat_equations_ok, flat_membership, fold_to_loop, membership_gl,
    membership_sl2, membership_sp, open_cell_gl, open_cell_sl2, open_cell_sp, perturb_chart,
    random_blocks, random_flat_solution, random_sp_blocks, schubert_index_map, seeded,
    sl2_jacobian_rank, sp_basis, sp_jacobian_rank, torus_solution_dim, unfold_from_loop, CellChart,
};
use crate::desing::{canonical_flag, fiber_is_forced, random_flag, tower_dim};
use crate::error::Result;
use crate::exactlin::{rat, Rat, RatMatrix};
use crate::framed::{orbit_tangent_dim, sample_orbit, sample_orbit_generic};
use crate::loopmod::open_fixed_point;
use crate::orbitgeom::verify_adherence;
use crate::partitions::{enumerate, max_partition, Partition};
use crate::pluecker::{
    check_k2_linear, check_pluecker_relations, check_x22_quadric, pluecker, sample_and_check,
    sample_x2m,
};
use crate::wedge::{character_coefficients, ehf_counts, gl1_relation_check, independence_report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Reduced sizes and sample counts.
    Quick,
    /// The acceptance sizes.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub profile: Profile,
    pub seed: u64,
    /// Replace one expected orbit type by a wrong one in check 1.
    pub inject_fault: bool,
}

impl VerifyConfig {
    pub fn full(seed: u64) -> Self {
        VerifyConfig {
            profile: Profile::Full,
            seed,
            inject_fault: false,
        }
    }

    pub fn quick(seed: u64) -> Self {
        VerifyConfig {
            profile: Profile::Quick,
            seed,
            inject_fault: false,
        }
    }

    fn full_profile(&self) -> bool {
        self.profile == Profile::Full
    }

    fn pick(&self, quick: usize, full: usize) -> usize {
        if self.full_profile() {
            full
        } else {
            quick
        }
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "orbit parametrization and dimension"),
    (2, "closure order and minimal degenerations"),
    (3, "desingularization"),
    (4, "X_{2,2} quadric and linear relations"),
    (5, "X_{2,m} necessary equations"),
    (6, "degenerate affine Grassmannian of gl_n"),
    (7, "flat family"),
    (8, "sl_2 and sp_2n cells"),
    (9, "torus dimension"),
    (10, "ehf basis"),
    (11, "gl_1 abelianized relation"),
    (12, "fixed points and index map"),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub checks: usize,
    /// At most `MAX_FAILURES` descriptions.
    pub failures: Vec<String>,
}

const MAX_FAILURES: usize = 10;

/// Accumulates individual checks.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(f);
            }
        }
    }

    fn error(&mut self, context: &str, e: crate::error::Error) {
        self.check(false, || format!("{context}: {e}"));
    }
}

fn shapes(max_product: usize) -> Vec<(usize, usize)> {
    (1..=max_product)
        .flat_map(|m| (1..=max_product / m).map(move |n| (m, n)))
        .collect()
}

fn all_types(max_product: usize) -> Vec<(usize, usize, Partition)> {
    shapes(max_product)
        .into_iter()
        .flat_map(|(m, n)| {
            (0..=m * n).flat_map(move |k| {
                enumerate(k, m, n)
                    .expect("k <= mN")
                    .into_iter()
                    .map(move |l| (m, n, l))
            })
        })
        .collect()
}

fn par_tally<T: Sync>(items: &[T], f: impl Fn(usize, &T) -> Tally + Sync) -> Tally {
    items
        .par_iter()
        .enumerate()
        .map(|(i, x)| f(i, x))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), |mut acc, t| {
            acc.merge(t);
            acc
        })
}

fn c1_orbits(cfg: &VerifyConfig) -> Tally {
    let types = all_types(cfg.pick(8, 12));
    let faulty = cfg
        .inject_fault
        .then(|| {
            types
                .iter()
                .position(|(m, n, l)| enumerate(l.size(), *m, *n).is_ok_and(|v| v.len() > 1))
        })
        .flatten();
    par_tally(&types, |i, (m, n, lam)| {
        let mut t = Tally::default();
        let mut expected = lam.clone();
        if Some(i) == faulty {
            expected = enumerate(lam.size(), *m, *n)
                .expect("valid")
                .into_iter()
                .find(|x| x != lam)
                .expect("several types");
        }
        match sample_orbit(lam, *m, *n, cfg.seed.wrapping_add(i as u64)) {
            Ok(u) => {
                let class = u.classify();
                t.check(class == expected, || {
                    format!("m={m} N={n}: {lam} sampled as {class}, expected {expected}")
                });
                let tangent = orbit_tangent_dim(&u);
                let d1 = lam.orbit_dim(*m).ok();
                let d2 = lam.orbit_dim_weighted(*m).ok();
                t.check(Some(tangent) == d1 && d1 == d2, || {
                    format!("m={m} N={n} {lam}: tangent {tangent}, formulas {d1:?} {d2:?}")
                });
            }
            Err(e) => t.error(&format!("sample {lam}"), e),
        }
        t
    })
}

fn c2_adherence(_cfg: &VerifyConfig) -> Tally {
    let mut t = Tally::default();
    for (k, m, n) in [(4, 3, 2), (3, 2, 3), (6, 3, 3)] {
        match verify_adherence(k, m, n) {
            Ok(r) => {
                for p in &r.pairs {
                    t.check(p.pass, || {
                        format!(
                            "({k},{m},{n}) {} vs {}: dominance {} rank {}",
                            p.lambda, p.mu, p.dominates, p.in_rank_conditions
                        )
                    });
                }
                for c in &r.covers {
                    t.check(c.pass, || {
                        format!("({k},{m},{n}) cover {} -> {} fails", c.from, c.to)
                    });
                }
            }
            Err(e) => t.error(&format!("adherence ({k},{m},{n})"), e),
        }
    }
    t
}

fn c3_desing(cfg: &VerifyConfig) -> Tally {
    let types = all_types(cfg.pick(6, 12));
    let mut t = par_tally(&types, |i, (m, n, lam)| {
        let mut t = Tally::default();
        let run = || -> Result<Tally> {
            let mut t = Tally::default();
            let ks = lam.rank_sequence(*n)?;
            t.check(tower_dim(&ks, *m)? == lam.orbit_dim(*m)?, || {
                format!("tower dim for {lam}, m={m}")
            });
            let u = sample_orbit(lam, *m, *n, cfg.seed.wrapping_add(i as u64))?;
            t.check(
                fiber_is_forced(&u, &ks) && canonical_flag(&u).is_valid(&ks),
                || format!("fibre over {lam}, m={m} N={n}"),
            );
            Ok(t)
        };
        match run() {
            Ok(x) => t.merge(x),
            Err(e) => t.error(&format!("{lam}"), e),
        }
        t
    });
    let flag_types = all_types(cfg.pick(4, 12));
    let samples = cfg.pick(10, 100);
    t.merge(par_tally(&flag_types, |i, (m, n, lam)| {
        let mut t = Tally::default();
        let Ok(ks) = lam.rank_sequence(*n) else {
            t.check(false, || format!("rank sequence of {lam}"));
            return t;
        };
        for s in 0..samples {
            let seed = cfg.seed.wrapping_add((i * samples + s) as u64);
            match random_flag(&ks, *m, *n, seed).and_then(|c| {
                let valid = c.is_valid(&ks);
                let class = c.project()?.classify();
                Ok(valid && lam.dominates(&class)?)
            }) {
                Ok(ok) => t.check(ok, || {
                    format!("flag seed {seed} for {lam} leaves the closure")
                }),
                Err(e) => t.error(&format!("flag for {lam}"), e),
            }
        }
        t
    }));
    t
}

fn c4_quadric(cfg: &VerifyConfig) -> Tally {
    let seeds: Vec<u64> = (0..cfg.pick(20, 100) as u64)
        .map(|s| cfg.seed.wrapping_add(s))
        .collect();
    par_tally(&seeds, |_, &seed| {
        let mut t = Tally::default();
        match sample_x2m(2, seed)
            .and_then(|u| pluecker(&u))
            .and_then(|p| {
                Ok(check_x22_quadric(&p)? && check_k2_linear(&p)? && check_pluecker_relations(&p)?)
            }) {
            Ok(ok) => t.check(ok, || format!("X_22 sample {seed}")),
            Err(e) => t.error(&format!("X_22 sample {seed}"), e),
        }
        t
    })
}

fn c5_conjecture(cfg: &VerifyConfig) -> Tally {
    let mut t = Tally::default();
    let samples = cfg.pick(10, 100);
    let max_m = if cfg.full_profile() { 5 } else { 4 };
    for m in 2..=max_m {
        match sample_and_check(m, samples, cfg.seed, true) {
            Ok(r) => {
                t.checks += r.samples - r.failures.len();
                for f in &r.failures {
                    t.check(false, || format!("m={m} seed {}", f.seed));
                }
            }
            Err(e) => t.error(&format!("m={m}"), e),
        }
    }
    t
}

fn c6_affine(cfg: &VerifyConfig) -> Tally {
    let mut t = Tally::default();
    let round_trips = cfg.pick(20, 100);
    let draws = cfg.pick(5, 20);
    for (n, depth) in [(1, 2), (2, 2), (2, 3)] {
        let run = || -> Result<Tally> {
            let mut t = Tally::default();
            let types = enumerate(n * depth, 2 * n, depth)?;
            let top = max_partition(n * depth, 2 * n, depth)?;
            let mut rng = seeded(cfg.seed ^ ((n * 10 + depth) as u64));
            for s in 0..round_trips {
                let lam = &types[rng.gen_range(0..types.len())];
                let loop_point = sample_orbit_generic(lam, 2 * n, depth, rng.gen())?;
                let u = unfold_from_loop(&loop_point)?;
                let member = membership_gl(&u, n, depth)?;
                let back = if member {
                    fold_to_loop(&u, n, depth)? == loop_point
                } else {
                    false
                };
                t.check(member && back, || {
                    format!("(n,N)=({n},{depth}) round trip {s} of type {lam}")
                });
            }
            for s in 0..draws {
                let xs = random_blocks(n, depth, &mut rng);
                let u = open_cell_gl(&xs, n, depth)?;
                let rank = cell_jacobian_rank(&xs, n, depth)?;
                t.check(rank == depth * n * n, || {
                    format!("(n,N)=({n},{depth}) draw {s}: Jacobian rank {rank}")
                });
                let class = fold_to_loop(&u, n, depth)?.classify();
                t.check(class == top, || {
                    format!("(n,N)=({n},{depth}) draw {s}: open cell folds to {class}")
                });
            }
            Ok(t)
        };
        match run() {
            Ok(x) => t.merge(x),
            Err(e) => t.error(&format!("(n,N)=({n},{depth})"), e),
        }
    }
    t
}

fn hbars() -> Vec<Rat> {
    vec![rat(0), rat(1), Rat::new(2.into(), 3.into()), rat(-2)]
}

fn c7_flat(cfg: &VerifyConfig) -> Tally {
    let charts = cfg.pick(20, 100);
    let jobs: Vec<(usize, Rat)> = hbars().into_iter().enumerate().collect();
    let mut t = par_tally(&jobs, |h, (_, hbar)| {
        let mut t = Tally::default();
        let mut rng = seeded(cfg.seed.wrapping_add(1000 * h as u64));
        for s in 0..charts {
            let depth = 1 + s % 4;
            let run = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<(CellChart, bool, bool)> {
                let base = random_flat_solution(2, depth, hbar, rng)?;
                let c = match s % 3 {
                    0 => base,
                    1 => perturb_chart(&base, rng),
                    _ => {
                        let mut c = CellChart::zero(2, depth, hbar.clone());
                        for k in 1..=depth {
                            for i in 0..depth {
                                c.set(k, i, random_blocks(2, 1, rng).remove(0))?;
                            }
                        }
                        c
                    }
                };
                let a = flat_membership(&c)?;
                let b = flat_equations_ok(&c)?;
                Ok((c, a, b))
            };
            match run(&mut rng) {
                Ok((c, a, b)) => {
                    t.check(a == b, || {
                        format!("ħ={hbar} K={depth} chart {s}: membership {a}, equations {b}")
                    });
                    if s % 3 == 0 {
                        t.check(a, || {
                            format!("ħ={hbar} K={depth} constructed solution {s} rejected")
                        });
                    }
                    if hbar == &rat(0) {
                        t.check(a == c.is_block_hankel(), || {
                            format!("K={depth} chart {s}: Hankel mismatch")
                        });
                    }
                }
                Err(e) => t.error(&format!("ħ={hbar} chart {s}"), e),
            }
        }
        t
    });
    // ħ = 0, n = 1, K = 2, entries in {-1, 0, 1}: solutions are exactly Hankel
    for code in 0..81usize {
        let mut c = CellChart::zero(1, 2, rat(0));
        let mut x = code;
        for (k, i) in [(1, 0), (1, 1), (2, 0), (2, 1)] {
            c.set(k, i, RatMatrix::from_i64(&[&[(x % 3) as i64 - 1]]))
                .expect("in range");
            x /= 3;
        }
        match flat_membership(&c) {
            Ok(a) => t.check(a == c.is_block_hankel(), || {
                format!("exhaustive chart {code}")
            }),
            Err(e) => t.error("exhaustive chart", e),
        }
    }
    t
}

fn c8_sl2_sp(cfg: &VerifyConfig) -> Tally {
    let samples = cfg.pick(2, 10);
    let mut jobs: Vec<(usize, usize)> = (1..=3).map(|d| (0, d)).collect();
    jobs.extend((1..=2).flat_map(|n| (1..=3).map(move |d| (n, d))));
    par_tally(&jobs, |j, &(n, depth)| {
        let mut t = Tally::default();
        let mut rng = seeded(cfg.seed.wrapping_add(7 * j as u64));
        for s in 0..samples {
            let run = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<(bool, usize, usize)> {
                if n == 0 {
                    let p: Vec<Vec<Rat>> = (0..3)
                        .map(|_| (0..depth).map(|_| rat(rng.gen_range(-3..=3))).collect())
                        .collect();
                    let u = open_cell_sl2(&p[0], &p[1], &p[2], depth)?;
                    let rank = sl2_jacobian_rank(&p[0], &p[1], &p[2], depth)?;
                    Ok((membership_sl2(&u, depth)?, rank, 3 * depth))
                } else {
                    let xs = random_sp_blocks(n, depth, rng);
                    let u = open_cell_sp(&xs, n, depth)?;
                    let dim = sp_basis(n).len();
                    let coeffs: Vec<Rat> = (0..depth * dim)
                        .map(|_| rat(rng.gen_range(-3..=3)))
                        .collect();
                    let rank = sp_jacobian_rank(&coeffs, n, depth)?;
                    Ok((membership_sp(&u, n, depth)?, rank, depth * (2 * n * n + n)))
                }
            };
            let label = if n == 0 {
                format!("sl2 N={depth}")
            } else {
                format!("sp n={n} N={depth}")
            };
            match run(&mut rng) {
                Ok((member, rank, expected)) => {
                    t.check(member, || format!("{label} sample {s} fails membership"));
                    t.check(rank == expected, || {
                        format!("{label} sample {s}: Jacobian rank {rank} != {expected}")
                    });
                }
                Err(e) => t.error(&label, e),
            }
        }
        t
    })
}

fn c9_torus(_cfg: &VerifyConfig) -> Tally {
    let mut t = Tally::default();
    for k in [2, 4, 6] {
        match torus_solution_dim(k) {
            Ok(r) => t.check(r.effective_dim == 3 && r.family_spans, || {
                format!(
                    "K={k}: dimension {} (raw nullity {})",
                    r.effective_dim, r.raw_nullity
                )
            }),
            Err(e) => t.error(&format!("K={k}"), e),
        }
    }
    t
}

fn c10_ehf(_cfg: &VerifyConfig) -> Tally {
    let mut t = Tally::default();
    let d = crate::wedge::DEFAULT_ENERGY;
    let chars = character_coefficients(d);
    match ehf_counts(d) {
        Ok(counts) => {
            for (e, (&c, &q)) in counts.iter().zip(&chars).enumerate() {
                t.check(c as u64 == q, || {
                    format!("energy {e}: {c} monomials, character {q}")
                });
            }
        }
        Err(e) => t.error("counts", e),
    }
    match independence_report(d) {
        Ok(r) => {
            for l in &r.levels {
                t.check(l.rank == l.count && l.homogeneous, || {
                    format!("energy {}: rank {} of {}", l.energy, l.rank, l.count)
                });
            }
        }
        Err(e) => t.error("ranks", e),
    }
    t
}

fn c11_gl1(_cfg: &VerifyConfig) -> Tally {
    let mut t = Tally::default();
    match gl1_relation_check(8) {
        Ok(r) => {
            for s in 2..=8 {
                t.check(!r.nonvanishing.contains(&s), || {
                    format!("coefficient at energy {s} is nonzero")
                });
            }
            t.check(r.dead_currents.is_empty(), || {
                format!("currents vanish on |0>: {:?}", r.dead_currents)
            });
        }
        Err(e) => t.error("gl1", e),
    }
    t
}

fn c12_fixed(cfg: &VerifyConfig) -> Tally {
    let jobs: Vec<(usize, usize, usize)> = shapes(cfg.pick(8, 12))
        .into_iter()
        .flat_map(|(m, n)| (0..=m * n).map(move |k| (k, m, n)))
        .collect();
    par_tally(&jobs, |_, &(k, m, n)| {
        let mut t = Tally::default();
        let run = || -> Result<(bool, bool)> {
            let open = open_fixed_point(k, m, n)?.classify() == max_partition(k, m, n)?;
            Ok((open, schubert_index_map(k, m, n)?.pattern_ok))
        };
        match run() {
            Ok((open, pattern)) => {
                t.check(open, || format!("open fixed point (k,m,N)=({k},{m},{n})"));
                t.check(pattern, || format!("index map (k,m,N)=({k},{m},{n})"));
            }
            Err(e) => t.error(&format!("(k,m,N)=({k},{m},{n})"), e),
        }
        t
    })
}

/// Runs one criterion, `1..=12`.
pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> Option<CriterionResult> {
    let (_, name) = CRITERIA.iter().find(|(i, _)| *i == id)?;
    let tally = match id {
        1 => c1_orbits(cfg),
        2 => c2_adherence(cfg),
        3 => c3_desing(cfg),
        4 => c4_quadric(cfg),
        5 => c5_conjecture(cfg),
        6 => c6_affine(cfg),
        7 => c7_flat(cfg),
        8 => c8_sl2_sp(cfg),
        9 => c9_torus(cfg),
        10 => c10_ehf(cfg),
        11 => c11_gl1(cfg),
        12 => c12_fixed(cfg),
        _ => return None,
    };
    Some(CriterionResult {
        id,
        name: name.to_string(),
        pass: tally.failed == 0 && tally.checks > 0,
        checks: tally.checks,
        failures: tally.failures,
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter_map(|(id, _)| run_criterion(*id, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_profile_passes() {
        for r in run_all(&VerifyConfig::quick(0)) {
            assert!(r.pass, "{} {}: {:?}", r.id, r.name, r.failures);
        }
    }

    #[test]
    fn injected_fault_is_detected() {
        let cfg = VerifyConfig {
            inject_fault: true,
            ..VerifyConfig::quick(0)
        };
        let r = run_criterion(1, &cfg).unwrap();
        assert!(!r.pass);
        assert_eq!(r.failures.len(), 1);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(13, &VerifyConfig::quick(0)).is_none());
    }
}
