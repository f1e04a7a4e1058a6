//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs with `cargo test --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use heffter::algebra::{Element, FieldSpec};
use heffter::autgroup::{exhaustive_search, restricted_search};
use heffter::embedding::{build_rho0, surface_report, verify_biembedding, Embedding, Face};
use heffter::heffter::{build_rank_one_canonical, is_multiplicative_subgroup, validate_heffter};
use heffter::orderings::{check_globally_simple, natural_orderings};
use heffter::PartiallyFilledArray;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn pi(field: &FieldSpec, m: usize, n: usize) -> Result<(PartiallyFilledArray, Embedding), String> {
    let a = build_rank_one_canonical(field, m, n).map_err(|e| e.to_string())?;
    let pair = natural_orderings(&a, 0).map_err(|e| e.to_string())?;
    let emb = build_rho0(&a, &pair).map_err(|e| e.to_string())?;
    Ok((a, emb))
}

fn z31() -> FieldSpec {
    FieldSpec::prime(31).unwrap()
}

fn signed(v: i64, q: i64) -> u32 {
    v.rem_euclid(q) as u32
}

fn face(vertices: &[u32]) -> Face {
    Face::new(vertices.iter().map(|&v| Element(v)).collect())
}

fn criterion_1() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_heffter"))
        .args(["construct", "--m", "3", "--n", "5"])
        .env_remove("HEFFTER_BUDGET_MS")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let expected = ["1 2 4 8 16", "5 10 20 9 18", "25 19 7 14 28"];
    ensure(rows == expected, || format!("rows {rows:?}"))?;
    Ok("H(3,5) over Z_31 cell-for-cell".into())
}

fn criterion_2() -> Outcome {
    let (a, emb) = pi(&z31(), 3, 5)?;
    let known: [i64; 30] = [
        1, -2, 10, -20, 7, -14, 8, -16, 18, -5, 25, -19, 2, -4, 20, -9, 14, -28, 16, -1, 5, -10, 19, -7, 4, -8, 9, -18, 28,
        -25,
    ];
    let expected: Vec<Element> = known.iter().map(|&v| Element(signed(v, 31))).collect();
    let cycle = emb.rho0_cycle();
    ensure(cycle == expected, || format!("cycle {cycle:?}"))?;
    let rows: Vec<Vec<u64>> = (0..3).map(|r| a.row_entries(r).iter().map(|x| x.value() as u64).collect()).collect();
    ensure(common::rho0_cycle_labels(&rows, 31) == known, || "reference rotation differs".into())?;
    ensure(emb.rho0_at(Element(1)) == Element(signed(-2, 31)), || "rho0(1) != -2".into())?;
    ensure(emb.rho0().cycles().iter().filter(|c| c.len() > 1).count() == 1, || "not a single cycle".into())?;
    Ok("rho0 is the expected 30-cycle".into())
}

fn criterion_3() -> Outcome {
    let field = z31();
    let (_, emb) = pi(&field, 3, 5)?;
    let faces: BTreeSet<&Face> = emb.faces().iter().collect();
    let f1 = face(&[0, 2, 12]);
    let f2 = face(&[0, 16, 3]);
    ensure(faces.contains(&f1) && faces.contains(&f2), || "example faces missing".into())?;
    let scaled = f1.scale(&field, Element(9));
    ensure(scaled == face(&[0, 18, 15]), || format!("9*(0,2,12) = {scaled}"))?;
    let shifted = f2.translate(&field, Element(15));
    ensure(scaled == shifted, || format!("(0,16,3)+15 = {shifted}"))?;
    ensure(faces.contains(&scaled), || "9*(0,2,12) is not a face".into())?;
    Ok("(0,2,12), (0,16,3) and 9*(0,2,12) = (0,16,3)+15".into())
}

fn criterion_4() -> Outcome {
    let (_, emb) = pi(&z31(), 3, 5)?;
    let r = restricted_search(&emb, 3, 5).map_err(|e| e.to_string())?;
    let e = exhaustive_search(&emb).map_err(|e| e.to_string())?;
    for rep in [&r, &e] {
        ensure(
            rep.aut0_plus == 15 && rep.cyclic && rep.aut0_minus == 0 && rep.total == 465,
            || format!("{:?}: +{} -{} total {} cyclic {}", rep.method, rep.aut0_plus, rep.aut0_minus, rep.total, rep.cyclic),
        )?;
    }
    ensure(r.same_group(&e), || "methods disagree".into())?;
    Ok("|Aut0+| = 15 cyclic, |Aut0-| = 0, |Aut| = 465 by both searches".into())
}

fn sweep_instances() -> Vec<(usize, usize, u64)> {
    common::admissible_prime_triples(200).into_iter().flat_map(|(m, n, q)| [(m, n, q), (n, m, q)]).collect()
}

fn criterion_5() -> Outcome {
    let required = [
        (3, 5, 31),
        (3, 7, 43),
        (3, 11, 67),
        (5, 7, 71),
        (3, 13, 79),
        (3, 17, 103),
        (7, 9, 127),
        (5, 13, 131),
        (3, 23, 139),
        (5, 19, 191),
        (9, 11, 199),
    ];
    let instances = sweep_instances();
    for r in required {
        ensure(instances.contains(&r), || format!("{r:?} not enumerated"))?;
    }
    for &(m, n, q) in &instances {
        let tag = format!("({m},{n},{q})");
        let field = FieldSpec::prime(q).map_err(|e| e.to_string())?;
        let a = build_rank_one_canonical(&field, m, n).map_err(|e| format!("{tag}: {e}"))?;
        ensure(validate_heffter(&a).ok, || format!("{tag} not Heffter"))?;
        ensure(check_globally_simple(&a), || format!("{tag} not globally simple"))?;
        let pair = natural_orderings(&a, 0).map_err(|e| e.to_string())?;
        ensure(pair.is_compatible(), || format!("{tag} not compatible"))?;
        let emb = build_rho0(&a, &pair).map_err(|e| format!("{tag}: {e}"))?;
        let bi = verify_biembedding(&emb, m, n);
        ensure(bi.ok, || format!("{tag} biembedding {bi:?}"))?;

        let expected_census = BTreeMap::from([(m, q as usize * n), (n, q as usize * m)]);
        let surface = surface_report(&emb).map_err(|e| e.to_string())?;
        ensure(surface.face_census == expected_census, || format!("{tag} census {:?}", surface.face_census))?;
        let rows: Vec<Vec<u64>> =
            (0..m).map(|r| a.row_entries(r).iter().map(|x| x.value() as u64).collect()).collect();
        let oracle = common::census(&common::trace_faces(&common::rho0_table(&rows, q), q));
        ensure(oracle == expected_census, || format!("{tag} oracle census {oracle:?}"))?;
        let genus = (2 - q as i64 * (1 + m as i64 + n as i64 - (m * n) as i64)) / 2;
        let faces = expected_census.values().sum::<usize>() as i64;
        let euler_genus = (2 - (q as i64 - (q * (q - 1) / 2) as i64 + faces)) / 2;
        ensure(surface.genus as i64 == genus && euler_genus == genus, || format!("{tag} genus {}", surface.genus))?;

        let r = restricted_search(&emb, m, n).map_err(|e| format!("{tag}: {e}"))?;
        ensure(
            r.cyclic && r.aut0_plus == m * n && r.aut0_minus == 0 && r.total == q * (m * n) as u64,
            || format!("{tag} aut +{} -{} total {} cyclic {}", r.aut0_plus, r.aut0_minus, r.total, r.cyclic),
        )?;
    }
    Ok(format!("{} instances (both orientations of {} triples)", instances.len(), instances.len() / 2))
}

fn criterion_6() -> Outcome {
    let field = FieldSpec::new(7, 3).map_err(|e| e.to_string())?;
    let (a, emb) = pi(&field, 9, 19)?;
    let v = validate_heffter(&a);
    ensure(v.ok, || v.summary())?;
    let shape = v.shape.ok_or("no shape")?;
    ensure((shape.m, shape.n) == (9, 19), || format!("shape {shape:?}"))?;
    let r = restricted_search(&emb, 9, 19).map_err(|e| e.to_string())?;
    ensure(
        r.cyclic && r.aut0_plus == 171 && r.aut0_minus == 0 && r.total == 58653 && r.total == 343 * 342 / 2,
        || format!("+{} -{} total {} cyclic {}", r.aut0_plus, r.aut0_minus, r.total, r.cyclic),
    )?;
    Ok(format!("{}: Aut0 cyclic of order 171, |Aut| = 58653", field.header()))
}

fn criterion_7() -> Outcome {
    // every single-cell change of H(3,5) breaks the Heffter conditions
    let field = z31();
    let (a, emb) = pi(&field, 3, 5)?;
    let mut perturbed = 0;
    for r in 0..3 {
        for c in 0..5 {
            for v in field.elements().filter(|&v| Some(v) != a.get(r, c)) {
                let mut b = a.clone();
                b.set(r, c, Some(v));
                ensure(!validate_heffter(&b).ok, || format!("cell ({r},{c}) := {v} still valid"))?;
                perturbed += 1;
            }
        }
    }

    // a genuine H(3,3) over Z_19 whose natural orderings do not compose to one cycle
    let z19 = FieldSpec::prime(19).unwrap();
    let h33 = PartiallyFilledArray::filled(z19, &[vec![7, 15, 16], vec![11, 10, 17], vec![1, 13, 5]])
        .map_err(|e| e.to_string())?;
    ensure(validate_heffter(&h33).ok, || "3x3 fixture is not Heffter".into())?;
    let pair = natural_orderings(&h33, 0).map_err(|e| e.to_string())?;
    ensure(!pair.is_compatible(), || "3x3 natural orderings reported compatible".into())?;
    ensure(build_rho0(&h33, &pair).is_err(), || "3x3 rho0 built".into())?;

    // every transposition of two nonzero elements spoils the biembedding
    let mut swaps = 0;
    for x in 1..31 {
        for y in (x + 1)..31 {
            let bad = emb.perturbed(Element(x), Element(y));
            ensure(!verify_biembedding(&bad, 3, 5).ok, || format!("swap ({x} {y}) still a biembedding"))?;
            swaps += 1;
        }
    }
    Ok(format!("{perturbed} cell changes, 3x3 incompatible, {swaps} transpositions"))
}

fn criterion_8() -> Outcome {
    let instances = sweep_instances();
    for &(m, n, q) in &instances {
        let field = FieldSpec::prime(q).map_err(|e| e.to_string())?;
        let a = build_rank_one_canonical(&field, m, n).map_err(|e| e.to_string())?;
        let entries: Vec<Element> = a.entries().map(|(_, x)| x).collect();
        ensure(is_multiplicative_subgroup(&field, &entries), || format!("({m},{n},{q}) library check"))?;
        // independent closure and size check
        let set: BTreeSet<u64> = entries.iter().map(|x| x.value() as u64).collect();
        let mn = (m * n) as u64;
        ensure(set.len() as u64 == mn, || format!("({m},{n},{q}) size {}", set.len()))?;
        let closed = set.iter().all(|&x| set.iter().all(|&y| set.contains(&(x * y % q))));
        ensure(closed, || format!("({m},{n},{q}) not closed"))?;
        let of_order_dividing: BTreeSet<u64> = (1..q).filter(|&x| common::pow_mod(x, mn, q) == 1).collect();
        ensure(set == of_order_dividing, || format!("({m},{n},{q}) not the subgroup of order mn"))?;
    }
    Ok(format!("{} instances", instances.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "exact array", Duration::from_secs(1), criterion_1),
        (2, "exact rotation", Duration::from_secs(1), criterion_2),
        (3, "exact faces", Duration::from_secs(1), criterion_3),
        (4, "automorphism counts", Duration::from_secs(10), criterion_4),
        (5, "family sweep q <= 200", Duration::from_secs(300), criterion_5),
        (6, "prime-power case q = 343", Duration::from_secs(600), criterion_6),
        (7, "negative controls", Duration::from_secs(60), criterion_7),
        (8, "subgroup invariant", Duration::from_secs(60), criterion_8),
    ];
    let mut failures = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {id} PASS  {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id} FAIL  {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", 8 - failures, 8);
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
