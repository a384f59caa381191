use std::path::Path;

use loopquiver::affine::{
    cell_jacobian_rank, flat_equations_ok, flat_membership, fold_to_loop, membership_gl,
    membership_sl2, membership_sp, open_cell_gl, open_cell_sl2, open_cell_sp, perturb_chart,
    random_blocks, random_flat_solution, random_sp_blocks, schubert_index_map, seeded,
    sl2_jacobian_rank, sp_basis, sp_jacobian_rank, torus_solution_dim, unfold_from_loop,
};
use loopquiver::desing::{canonical_flag, fiber_is_forced, random_flag, tower_dim};
use loopquiver::exactlin::{format_rat, parse_rat, rat, Rat};
use loopquiver::framed::{sample_orbit, sample_orbit_generic, FramedPair};
use loopquiver::loopmod::{open_fixed_point, GeneratorSet, TSubspace};
use loopquiver::orbitgeom::{degeneration_family, verify_adherence, OrbitPoset, GENERIC_Z};
use loopquiver::partitions::{enumerate, max_partition, Partition};
use loopquiver::pluecker::{
    check_k2_linear, check_pluecker_relations, check_x22_quadric, pluecker, sample_and_check,
};
use loopquiver::verify::{run_criterion, Profile, VerifyConfig, CRITERIA};
use loopquiver::wedge::{
    character_coefficients, ehf_counts, gl1_relation_check, independence_report,
};
use loopquiver::Error;
use rand::Rng;
use serde_json::{json, Value};

use crate::{Command, ProfileArg, Shape, MAX_MN, MAX_WINDOW};

pub struct Outcome {
    pub pass: bool,
    pub config: Value,
    pub result: Value,
}

pub enum Failure {
    /// Bad parameters or unreadable input.
    Usage(String),
    /// The input lacks the property the command needs.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInvariant
            | Error::Unstable
            | Error::AsymmetricW
            | Error::NotSymplecticAlgebra => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Run = Result<Outcome, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn cap_mn(m: usize, depth: usize) -> Result<(), Failure> {
    if m == 0 || depth == 0 {
        return Err(usage("m and N must be positive"));
    }
    if m * depth > MAX_MN {
        return Err(usage(format!(
            "mN = {} exceeds the cap {MAX_MN}",
            m * depth
        )));
    }
    Ok(())
}

fn cap_window(powers: usize) -> Result<(), Failure> {
    if powers > MAX_WINDOW {
        return Err(usage(format!(
            "a window of {powers} powers exceeds the cap {MAX_WINDOW}"
        )));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_hbar(s: &str) -> Result<Rat, Failure> {
    parse_rat(s).map_err(Failure::from)
}

pub fn run(cmd: &Command, seed: u64) -> Run {
    match cmd {
        Command::Classify { input } => classify(input),
        Command::OrbitPoset { shape, verify } => orbit_poset(shape, *verify),
        Command::Degeneration { l1, l2, depth, z } => degeneration(*l1, *l2, *depth, z),
        Command::Desing {
            lambda,
            m,
            depth,
            samples,
        } => desing(lambda, *m, *depth, *samples, seed),
        Command::Pluecker {
            m,
            samples,
            conjecture,
            input,
        } => match input {
            Some(path) => pluecker_input(path),
            None => pluecker_samples(
                m.expect("required without --input"),
                *samples,
                *conjecture,
                seed,
            ),
        },
        Command::Graff { n, depth, samples } => graff(*n, *depth, *samples, seed),
        Command::Flatfam {
            depth,
            n,
            hbar,
            samples,
        } => flatfam(*depth, *n, hbar, *samples, seed),
        Command::Sl2 { depth, samples } => sl2(*depth, *samples, seed),
        Command::Sp { n, depth, samples } => sp(*n, *depth, *samples, seed),
        Command::Torus { depth } => torus(*depth),
        Command::Schubert { shape } => schubert(shape),
        Command::Ehf { max_energy } => ehf(*max_energy),
        Command::Gl1 { max_energy } => gl1(*max_energy),
        Command::VerifyAll {
            profile,
            only,
            inject_fault,
        } => verify_all(*profile, only, *inject_fault, seed),
    }
}

fn describe(t: &TSubspace) -> Result<Value, Failure> {
    let class = t.classify();
    let m = t.space().m();
    Ok(json!({
        "dim": t.dim(),
        "partition": class.to_string(),
        "power_dims": t.power_dims(),
        "orbit_dim": class.orbit_dim(m)?,
        "rank_sequence": class.rank_sequence(t.space().depth())?.values(),
    }))
}

fn classify(input: &Path) -> Run {
    let text = read(input)?;
    let raw: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON: {e}")))?;
    let (kind, t) = if raw.get("phi").is_some() {
        let pair: FramedPair =
            serde_json::from_value(raw).map_err(|e| usage(format!("invalid framed pair: {e}")))?;
        ("framed_pair", pair.to_subspace()?)
    } else {
        (
            "subspace",
            GeneratorSet::from_json(&text)?.into_tsubspace()?,
        )
    };
    Ok(Outcome {
        pass: true,
        config: json!({ "input": input.display().to_string(), "kind": kind }),
        result: describe(&t)?,
    })
}

fn orbit_poset(shape: &Shape, verify: bool) -> Run {
    let Shape { k, m, depth } = *shape;
    cap_mn(m, depth)?;
    let poset = OrbitPoset::build(k, m, depth)?;
    let mut pass = poset.check()?;
    let mut result = json!({ "poset": to_value(&poset), "structure_ok": pass });
    if verify {
        let report = verify_adherence(k, m, depth)?;
        pass &= report.pass;
        result["adherence"] = to_value(&report);
    }
    Ok(Outcome {
        pass,
        config: json!({ "k": k, "m": m, "N": depth, "verify": verify }),
        result,
    })
}

fn degeneration(l1: usize, l2: usize, depth: usize, z: &[String]) -> Run {
    cap_window(depth)?;
    let values: Vec<Rat> = if z.is_empty() {
        GENERIC_Z
            .iter()
            .map(|&x| rat(x))
            .chain([rat(0), rat(1), rat(-1)])
            .collect()
    } else {
        z.iter().map(|s| parse_rat(s)).collect::<Result<_, _>>()?
    };
    let generic = Partition::new(vec![l1, l2])?;
    let special = Partition::new(vec![l1.wrapping_sub(1), l2 + 1]);
    let mut pass = true;
    let mut points = Vec::new();
    for x in &values {
        let u = degeneration_family(l1, l2, depth, x)?;
        let class = u.classify();
        let unit = x == &rat(1) || x == &rat(-1);
        let expected = if x == &rat(0) {
            special.clone().ok()
        } else if unit {
            None
        } else {
            Some(generic.clone())
        };
        if let Some(e) = &expected {
            pass &= class == *e && u.dim() == l1 + l2;
        }
        points.push(json!({
            "z": format_rat(x),
            "dim": u.dim(),
            "partition": class.to_string(),
            "expected": expected.map(|e| e.to_string()),
        }));
    }
    Ok(Outcome {
        pass,
        config: json!({ "l1": l1, "l2": l2, "N": depth }),
        result: json!({ "points": points }),
    })
}

fn desing(lambda: &str, m: usize, depth: usize, samples: usize, seed: u64) -> Run {
    cap_mn(m, depth)?;
    let lam: Partition = lambda.parse()?;
    let lam = lam.padded(m)?;
    let ks = lam.rank_sequence(depth)?;
    let tower = tower_dim(&ks, m)?;
    let orbit = lam.orbit_dim(m)?;
    let point = sample_orbit(&lam, m, depth, seed)?;
    let fibre = fiber_is_forced(&point, &ks) && canonical_flag(&point).is_valid(&ks);
    let mut classes = std::collections::BTreeMap::<String, usize>::new();
    let mut inside = true;
    for s in 0..samples as u64 {
        let flag = random_flag(&ks, m, depth, seed.wrapping_add(s))?;
        let class = flag.project()?.classify();
        inside &= flag.is_valid(&ks) && lam.dominates(&class)?;
        *classes.entry(class.to_string()).or_default() += 1;
    }
    Ok(Outcome {
        pass: tower == orbit && fibre && inside,
        config: json!({ "lambda": lam.to_string(), "m": m, "N": depth, "samples": samples }),
        result: json!({
            "rank_sequence": ks.values(),
            "tower_dim": tower,
            "orbit_dim": orbit,
            "fibre_is_canonical_flag": fibre,
            "flags_in_closure": inside,
            "projected_types": classes,
        }),
    })
}

fn pluecker_input(path: &Path) -> Run {
    let t = GeneratorSet::from_json(&read(path)?)?.into_tsubspace()?;
    let p = pluecker(&t)?;
    let relations = check_pluecker_relations(&p)?;
    let mut result = json!({
        "k": p.k(),
        "ambient": p.ambient(),
        "coords": p.coords().iter().map(format_rat).collect::<Vec<_>>(),
        "pluecker_relations": relations,
    });
    let mut pass = relations;
    if p.k() == 2 && t.space().depth() == 2 {
        let linear = check_k2_linear(&p)?;
        pass &= linear;
        result["k2_linear"] = Value::from(linear);
        if t.space().m() == 2 {
            let quadric = check_x22_quadric(&p)?;
            pass &= quadric;
            result["x22_quadric"] = Value::from(quadric);
        }
    }
    Ok(Outcome {
        pass,
        config: json!({ "input": path.display().to_string() }),
        result,
    })
}

fn pluecker_samples(m: usize, samples: usize, conjecture: bool, seed: u64) -> Run {
    cap_mn(m, 2)?;
    if m < 2 {
        return Err(usage("X_(2,m) needs m >= 2"));
    }
    let report = sample_and_check(m, samples, seed, conjecture)?;
    Ok(Outcome {
        pass: report.pass(),
        config: json!({ "m": m, "samples": samples, "conjecture": conjecture }),
        result: to_value(&report),
    })
}

fn graff(n: usize, depth: usize, samples: usize, seed: u64) -> Run {
    cap_mn(2 * n, depth)?;
    cap_window(2 * depth)?;
    let types = enumerate(n * depth, 2 * n, depth)?;
    let top = max_partition(n * depth, 2 * n, depth)?;
    let mut rng = seeded(seed);
    let (mut round_trips, mut ranks_ok, mut open_ok) = (0, 0, 0);
    let mut ranks = Vec::new();
    for _ in 0..samples {
        let lam = &types[rng.gen_range(0..types.len())];
        let t = sample_orbit_generic(lam, 2 * n, depth, rng.gen())?;
        let u = unfold_from_loop(&t)?;
        if membership_gl(&u, n, depth)? && fold_to_loop(&u, n, depth)? == t {
            round_trips += 1;
        }
        let xs = random_blocks(n, depth, &mut rng);
        let rank = cell_jacobian_rank(&xs, n, depth)?;
        ranks_ok += usize::from(rank == depth * n * n);
        ranks.push(rank);
        open_ok +=
            usize::from(fold_to_loop(&open_cell_gl(&xs, n, depth)?, n, depth)?.classify() == top);
    }
    Ok(Outcome {
        pass: round_trips == samples && ranks_ok == samples && open_ok == samples,
        config: json!({ "n": n, "N": depth, "samples": samples }),
        result: json!({
            "round_trips": round_trips,
            "jacobian_ranks": ranks,
            "expected_rank": depth * n * n,
            "open_cell_type": top.to_string(),
            "open_cells_in_open_orbit": open_ok,
        }),
    })
}

fn flatfam(depth: usize, n: usize, hbar: &str, samples: usize, seed: u64) -> Run {
    if depth == 0 || n == 0 {
        return Err(usage("K and n must be positive"));
    }
    cap_window(2 * depth + 3)?;
    if n > 4 {
        return Err(usage("n is capped at 4"));
    }
    let h = parse_hbar(hbar)?;
    let mut rng = seeded(seed);
    let (mut agree, mut accepted, mut rejected, mut hankel_ok) = (0, 0, 0, 0);
    for s in 0..samples {
        let base = random_flat_solution(n, depth, &h, &mut rng)?;
        let chart = if s % 2 == 0 {
            base
        } else {
            perturb_chart(&base, &mut rng)
        };
        let a = flat_membership(&chart)?;
        let b = flat_equations_ok(&chart)?;
        agree += usize::from(a == b);
        if s % 2 == 0 {
            accepted += usize::from(a);
        } else {
            rejected += usize::from(!a);
        }
        if h == rat(0) {
            hankel_ok += usize::from(a == chart.is_block_hankel());
        }
    }
    let constructed = samples.div_ceil(2);
    let hankel_pass = h != rat(0) || hankel_ok == samples;
    Ok(Outcome {
        pass: agree == samples && accepted == constructed && hankel_pass,
        config: json!({ "K": depth, "n": n, "hbar": format_rat(&h), "samples": samples }),
        result: json!({
            "predicates_agree": agree,
            "solutions_accepted": accepted,
            "solutions_constructed": constructed,
            "perturbations_rejected": rejected,
            "hankel_matches": (h == rat(0)).then_some(hankel_ok),
        }),
    })
}

fn sl2(depth: usize, samples: usize, seed: u64) -> Run {
    cap_mn(2, depth)?;
    if depth == 0 {
        return Err(usage("N must be positive"));
    }
    let mut rng = seeded(seed);
    let mut members = 0;
    let mut ranks = Vec::new();
    for _ in 0..samples {
        let p: Vec<Vec<Rat>> = (0..3)
            .map(|_| (0..depth).map(|_| rat(rng.gen_range(-3..=3))).collect())
            .collect();
        let u = open_cell_sl2(&p[0], &p[1], &p[2], depth)?;
        members += usize::from(membership_sl2(&u, depth)?);
        ranks.push(sl2_jacobian_rank(&p[0], &p[1], &p[2], depth)?);
    }
    Ok(Outcome {
        pass: members == samples && ranks.iter().all(|&r| r == 3 * depth),
        config: json!({ "N": depth, "samples": samples }),
        result: json!({ "members": members, "jacobian_ranks": ranks, "expected_rank": 3 * depth }),
    })
}

fn sp(n: usize, depth: usize, samples: usize, seed: u64) -> Run {
    cap_mn(2 * n, depth)?;
    let mut rng = seeded(seed);
    let dim = sp_basis(n).len();
    let mut members = 0;
    let mut ranks = Vec::new();
    for _ in 0..samples {
        let xs = random_sp_blocks(n, depth, &mut rng);
        members += usize::from(membership_sp(&open_cell_sp(&xs, n, depth)?, n, depth)?);
        let coeffs: Vec<Rat> = (0..depth * dim)
            .map(|_| rat(rng.gen_range(-3..=3)))
            .collect();
        ranks.push(sp_jacobian_rank(&coeffs, n, depth)?);
    }
    let expected = depth * dim;
    Ok(Outcome {
        pass: members == samples && ranks.iter().all(|&r| r == expected),
        config: json!({ "n": n, "N": depth, "samples": samples }),
        result: json!({ "members": members, "jacobian_ranks": ranks, "expected_rank": expected }),
    })
}

fn torus(depth: usize) -> Run {
    cap_window(2 * depth)?;
    let r = torus_solution_dim(depth)?;
    Ok(Outcome {
        pass: r.effective_dim == 3 && r.family_spans,
        config: json!({ "K": depth }),
        result: to_value(&r),
    })
}

fn schubert(shape: &Shape) -> Run {
    let Shape { k, m, depth } = *shape;
    cap_mn(m, depth)?;
    let report = schubert_index_map(k, m, depth)?;
    let open = open_fixed_point(k, m, depth)?.classify();
    let top = max_partition(k, m, depth)?;
    Ok(Outcome {
        pass: report.pattern_ok && open == top,
        config: json!({ "k": k, "m": m, "N": depth }),
        result: json!({
            "index_map": to_value(&report),
            "open_fixed_point_type": open.to_string(),
            "max_partition": top.to_string(),
        }),
    })
}

fn ehf(d: usize) -> Run {
    let counts = ehf_counts(d)?;
    let report = independence_report(d)?;
    Ok(Outcome {
        pass: report.pass(),
        config: json!({ "max_energy": d }),
        result: json!({
            "counts": counts,
            "ranks": report.levels.iter().map(|l| l.rank).collect::<Vec<_>>(),
            "character": character_coefficients(d),
            "levels": to_value(&report.levels),
        }),
    })
}

fn gl1(d: usize) -> Run {
    let report = gl1_relation_check(d)?;
    Ok(Outcome {
        pass: report.pass(),
        config: json!({ "max_energy": d }),
        result: to_value(&report),
    })
}

fn verify_all(profile: ProfileArg, only: &[u8], inject_fault: bool, seed: u64) -> Run {
    if let Some(bad) = only
        .iter()
        .find(|id| !CRITERIA.iter().any(|(c, _)| c == *id))
    {
        return Err(usage(format!(
            "no criterion {bad}; valid ids are 1 to {}",
            CRITERIA.len()
        )));
    }
    let cfg = VerifyConfig {
        profile: match profile {
            ProfileArg::Quick => Profile::Quick,
            ProfileArg::Full => Profile::Full,
        },
        seed,
        inject_fault,
    };
    let results: Vec<_> = CRITERIA
        .iter()
        .filter(|(id, _)| only.is_empty() || only.contains(id))
        .filter_map(|(id, _)| run_criterion(*id, &cfg))
        .collect();
    for r in &results {
        eprintln!(
            "criterion {:>2} {}: {}",
            r.id,
            if r.pass { "PASS" } else { "FAIL" },
            r.name
        );
    }
    Ok(Outcome {
        pass: results.iter().all(|r| r.pass),
        config: to_value(&cfg),
        result: json!({ "criteria": to_value(&results) }),
    })
}
