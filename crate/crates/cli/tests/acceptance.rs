//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always show up in the output.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sphroot_core::divisors::{weights_in_box, Curve};
use sphroot_core::engine::{certify_many, demazure_roots, VarietySpec};
use sphroot_core::lattice::*;
use sphroot_core::roots::{enumerate_roots, roots_of_cone};
use sphroot_core::sample;
use sphroot_core::type1::*;
use sphroot_core::type2::validate_type2;

const SEED: u64 = 0x5eed_2024;
const SUITE_SIZE: usize = 56;

type Check = Result<String, String>;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphroot"))
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_json(args: &[&str]) -> Result<Value, String> {
    let out = bin().args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int_vecs(v: &Value) -> Vec<LatticeVector> {
    serde_json::from_value(v.clone()).expect("integer vectors")
}

fn flagship() -> Check {
    let start = Instant::now();
    let out = run_json(&["roots", &data("example.json"), "--bound", "2", "--certify"])?;
    let elapsed = start.elapsed();
    let int = int_vecs(&out["enumerated"]["interior"]);
    let ext = int_vecs(&out["enumerated"]["exterior"]);
    ensure(int == vec![vec![-1, -1], vec![1, 1]], || format!("interior {int:?}"))?;
    ensure(ext.is_empty(), || format!("exterior {ext:?}"))?;
    let certs = out["certificates"].as_array().ok_or("no certificates")?;
    ensure(certs.len() == 2 && certs.iter().all(|c| c["verdict"] == "pass"), || format!("certificates {certs:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("interior {{(-1,-1),(1,1)}}, exterior empty, 2 certificates pass, {elapsed:?}"))
}

fn sl2_triples(suite: &[SphericalDataI]) -> Check {
    let start = Instant::now();
    for (i, d) in suite.iter().enumerate() {
        let tr = sl2_triple(d).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(tr.plus.commutator(&tr.minus) == tr.delta, || format!("instance {i}: [d+, d-] != delta"))?;
        ensure(tr.delta.commutator(&tr.plus) == tr.plus.scale(&q(2)), || format!("instance {i}: [delta, d+] != 2 d+"))?;
        ensure(tr.delta.commutator(&tr.minus) == tr.minus.scale(&q(-2)), || format!("instance {i}: [delta, d-] != -2 d-"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    let p1 = suite.iter().filter(|d| d.curve() == Curve::P1).count();
    Ok(format!("{} instances ({p1} over P1), 0 failures, {elapsed:?}", suite.len()))
}

fn kernel_identity(suite: &[SphericalDataI]) -> Check {
    let mut checked = 0;
    for (i, d) in suite.iter().enumerate() {
        let tr = sl2_triple(d).map_err(|e| e.to_string())?;
        for side in [BorelSide::Minus, BorelSide::Plus] {
            let dual = d.omega(side).map_err(|e| e.to_string())?.dual();
            for m in weights_in_box(&dual, 4).into_iter().filter(|m| d.in_weight_lattice(m)) {
                let g = kernel_generator(d, side, &m).map_err(|e| format!("instance {i}, m = {m:?}: {e}"))?;
                let image = tr.side(side).apply(&g);
                ensure(image.is_zero(), || format!("instance {i}, {}, m = {m:?}: image {image:?}", side.as_str()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} kernel elements, 0 failures"))
}

fn round_trip(suite: &[SphericalDataI]) -> Check {
    let p1: Vec<&SphericalDataI> = suite.iter().filter(|d| d.curve() == Curve::P1).collect();
    ensure(p1.len() >= 25, || format!("only {} P1 instances", p1.len()))?;
    for (i, d) in p1.iter().enumerate() {
        for side in [BorelSide::Minus, BorelSide::Plus] {
            let cc = colored_cone(d, side).map_err(|e| format!("P1 instance {i}: {e}"))?;
            let back = from_colored_cone(&cc, &d.homogeneous()).map_err(|e| format!("P1 instance {i}: {e}"))?;
            ensure(back == **d, || format!("P1 instance {i}, {}: {back:?} != {d:?}", side.as_str()))?;
        }
    }
    // Through the binary: the canonical spec survives cone -> inverse byte for byte.
    let canon = pipe(&["cone", "--inverse", "-"], &pipe(&["cone", &data("p1.json")], "")?)?;
    for side in ["minus", "plus"] {
        let again = pipe(&["cone", "--inverse", "-"], &pipe(&["cone", "--side", side, "-"], &canon)?)?;
        ensure(again == canon, || format!("CLI round trip ({side}) changed the spec"))?;
    }
    Ok(format!("{} P1 instances x 2 sides, plus CLI byte-identical round trip", p1.len()))
}

fn pipe(args: &[&str], stdin: &str) -> Result<String, String> {
    use std::io::Write;
    let mut child = bin()
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    child.stdin.take().expect("piped").write_all(stdin.as_bytes()).map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?} exited with {:?}", out.status.code()))?;
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

/// Roots of a cone straight from the definition: some ray pairs to -1 and
/// every other ray pairs non-negatively.
fn brute_cone_roots(rays: &[LatticeVector], bound: i64) -> BTreeSet<LatticeVector> {
    let n = rays[0].len();
    let mut out = BTreeSet::new();
    let mut theta = vec![-bound; n];
    loop {
        let pairings: Vec<i64> = rays.iter().map(|r| r.iter().zip(&theta).map(|(a, b)| a * b).sum()).collect();
        if pairings.iter().filter(|p| **p == -1).count() == 1 && pairings.iter().all(|p| *p >= -1) {
            out.insert(theta.clone());
        }
        let Some(i) = theta.iter().position(|x| *x < bound) else { break };
        theta[i] += 1;
        theta[..i].iter_mut().for_each(|x| *x = -bound);
    }
    out
}

fn cone_oracle(rng: &mut ChaCha8Rng) -> Check {
    let mut total = 0;
    for k in 0..100 {
        let n = 1 + k % 4;
        let c = sample::strongly_convex_cone(rng, n);
        let fast: BTreeSet<LatticeVector> =
            enumerate_roots(&roots_of_cone(&c).map_err(|e| e.to_string())?, 6).into_iter().collect();
        let slow = brute_cone_roots(&c.rays_lattice(), 6);
        ensure(fast == slow, || format!("cone {:?}: {fast:?} vs {slow:?}", c.rays_lattice()))?;
        total += fast.len();
    }
    Ok(format!("100 cones (ranks 1-4), {total} roots, 0 discrepancies"))
}

fn random_box_vector(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> LatticeVector {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

fn certification(suite: &[SphericalDataI], rng: &mut ChaCha8Rng) -> Check {
    let (mut roots, mut non) = (0, 0);
    for (i, d) in suite.iter().enumerate() {
        let side = if i % 2 == 0 { BorelSide::Minus } else { BorelSide::Plus };
        let x = VarietySpec { kind: sphroot_core::engine::VarietyKind::TypeI(d.clone()), side };
        let dr = demazure_roots(&x).map_err(|e| e.to_string())?;
        let (ext, int) = dr.enumerate(4);
        let all: Vec<LatticeVector> = ext.into_iter().chain(int).collect();
        for r in certify_many(&x, &all, 3).map_err(|e| e.to_string())? {
            ensure(r.passed(), || format!("instance {i}: root {:?} failed: {:?}", r.root, r.verdict))?;
        }
        roots += all.len();
        let mut samples = BTreeSet::new();
        while samples.len() < 20 {
            let t = random_box_vector(rng, d.rank(), 4);
            if !dr.contains(&t) {
                samples.insert(t);
            }
        }
        // Near misses: toric roots of Gamma that the variety does not have.
        let gamma_roots = roots_of_cone(&dr.gamma).map_err(|e| e.to_string())?;
        samples.extend(enumerate_roots(&gamma_roots, 4).into_iter().filter(|t| d.in_weight_lattice(t) && !dr.contains(t)));
        let samples: Vec<LatticeVector> = samples.into_iter().collect();
        for r in certify_many(&x, &samples, 3).map_err(|e| e.to_string())? {
            ensure(!r.passed(), || format!("instance {i}: non-root {:?} passed", r.root))?;
        }
        non += samples.len();
    }
    Ok(format!("{roots} roots certified, {non} non-roots (random and near misses) rejected, 0 anomalies"))
}

fn type_two(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..50 {
        let d = sample::type2(rng, 2);
        let dr = demazure_roots(&VarietySpec::type2(d.clone())).map_err(|e| e.to_string())?;
        let (ext, int) = dr.enumerate(6);
        ensure(ext.is_empty() && int.is_empty(), || format!("{:?}: {ext:?} {int:?}", d.sigma.rays_lattice()))?;
    }
    let o = Cone::from_lattice(Side::N, 3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).map_err(|e| e.to_string())?;
    let d = validate_type2(&o, &[-1, 1, 0]).map_err(|e| e.to_string())?;
    let x = VarietySpec::type2(d);
    let (ext, int) = demazure_roots(&x).map_err(|e| e.to_string())?.enumerate(6);
    ensure(ext == vec![vec![0, 0, -1]] && int.is_empty(), || format!("orthant: {ext:?} {int:?}"))?;
    let cert = certify_many(&x, &ext, 3).map_err(|e| e.to_string())?;
    ensure(cert.iter().all(|r| r.passed()), || format!("orthant certificate {cert:?}"))?;
    Ok("50 random rank-2 instances empty; orthant exterior = {(0,0,-1)}, certified".into())
}

/// `{theta in L : v0(theta) = v1(theta) = ±1}` by scanning the box.
fn brute_interior(d: &SphericalDataI, bound: i64) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            let t = vec![a, b];
            let (x, y) = (dot(&d.v0, &qv(&t)), dot(&d.v1, &qv(&t)));
            if d.in_weight_lattice(&t) && x == y && (x == q(1) || x == q(-1)) {
                out.push(t);
            }
        }
    }
    out
}

fn catalog(suite: &[SphericalDataI]) -> Check {
    let bound = 12;
    let mut notes = Vec::new();
    for k in 1..=5 {
        let (d, _) = catalog_homogeneous(SubgroupSpec::Q1(k)).map_err(|e| e.to_string())?;
        let (ext, int) = demazure_roots(&VarietySpec::type1(d.clone())).map_err(|e| e.to_string())?.enumerate(bound);
        let expected = brute_interior(&d, bound);
        ensure(ext.is_empty(), || format!("Q1({k}) exterior {ext:?}"))?;
        ensure(int == expected, || format!("Q1({k}): interior {int:?}, solutions {expected:?}"))?;
        if 2 % k == 0 {
            ensure(int.len() == 2, || format!("Q1({k}): expected two interior roots, got {int:?}"))?;
        }
        notes.push(format!("Q1({k}):{}", int.len()));
    }
    for s in [SubgroupSpec::Q2, SubgroupSpec::N1(1), SubgroupSpec::N1(3), SubgroupSpec::N2(0), SubgroupSpec::N2(2)] {
        let (d, _) = catalog_homogeneous(s).map_err(|e| e.to_string())?;
        let (ext, int) = demazure_roots(&VarietySpec::type1(d)).map_err(|e| e.to_string())?.enumerate(bound);
        ensure(ext.is_empty() && int.is_empty(), || format!("{s:?}: {ext:?} {int:?}"))?;
    }
    ensure(catalog_homogeneous(SubgroupSpec::Q1(0)).is_err(), || "Q1(0) accepted".into())?;
    // Exterior families carry the equalities of their row.
    for (i, d) in suite.iter().enumerate() {
        let dr = demazure_roots(&VarietySpec::type1(d.clone())).map_err(|e| e.to_string())?;
        let row: Vec<(QVector, Rational)> = match d.case {
            Case::Reflexive => vec![(d.v0.clone(), q(0)), (d.v1.clone(), q(0))],
            Case::Skew => vec![(d.v1.clone(), q(0))],
        };
        for f in &dr.exterior.families {
            ensure(f.equalities == row, || format!("instance {i}: exterior family {f:?}"))?;
            ensure(dot(&f.distinguished_ray, &d.eq()) == q(0), || format!("instance {i}: exterior ray off e-perp"))?;
        }
        if d.case == Case::Skew {
            ensure(dr.interior.families.is_empty(), || format!("instance {i}: skew with interior families"))?;
        }
    }
    Ok(format!(
        "interior = solution set ({}; k >= 3 has no lattice solution); Q2/N1/N2 empty; exterior rows match",
        notes.join(" ")
    ))
}

fn properness(suite: &[SphericalDataI]) -> Check {
    let mut a1 = 0;
    for (i, d) in suite.iter().filter(|d| d.curve() == Curve::A1).enumerate() {
        let p = d.divisor().map_err(|e| e.to_string())?.is_proper();
        ensure(p.proper, || format!("A1 instance {i}: {}", p.reason))?;
        a1 += 1;
    }
    let instance = |corner: Option<i64>| -> Result<SphericalDataI, String> {
        let sigma = Cone::from_lattice(Side::N, 2, &[vec![1, 2], vec![2, 1]]).map_err(|e| e.to_string())?;
        let apex = corner.map_or(zero_vec(2), |c| qv(&[c, c]));
        Ok(SphericalDataI {
            case: Case::Reflexive,
            v0: qv(&[-1, 0]),
            v1: qv(&[0, -1]),
            delta_inf: Some(Polyhedron::translate_of(apex, sigma.clone()).map_err(|e| e.to_string())?),
            sigma,
            e: vec![-1, 1],
        })
    };
    let good = instance(Some(3))?.divisor().map_err(|e| e.to_string())?.is_proper();
    ensure(good.proper, || format!("(3,3) + sigma: {}", good.reason))?;
    let bad = instance(None)?.divisor().map_err(|e| e.to_string())?.is_proper();
    ensure(!bad.proper && !bad.violating.is_empty(), || format!("sigma: {bad:?}"))?;
    let named = bad.violating.iter().all(|v| bad.reason.contains(&fmt_vec(v)));
    ensure(named, || format!("violating vertex not named: {}", bad.reason))?;
    Ok(format!("{a1} A1 divisors proper; (3,3)+sigma proper; sigma improper ({})", bad.reason))
}

fn color_tables(suite: &[SphericalDataI]) -> Check {
    let mut checked = 0;
    for (i, d) in suite.iter().enumerate() {
        let divisor = d.divisor().map_err(|e| e.to_string())?;
        let table = color_table(d).map_err(|e| e.to_string())?;
        for side in [BorelSide::Minus, BorelSide::Plus] {
            let dual = d.omega(side).map_err(|e| e.to_string())?.dual();
            for m in weights_in_box(&dual, 3) {
                if !d.in_weight_lattice(&m) || !dual.in_relative_interior(&qv(&m)) {
                    continue;
                }
                let g = kernel_generator(d, side, &m).map_err(|e| e.to_string())?;
                let f = g.coefficient(&m);
                let parts = divisor.principal_divisor_parts(&qv(&m), &f).map_err(|e| format!("instance {i}, m = {m:?}: {e}"))?;
                ensure(!parts.residual_zeros, || format!("instance {i}, m = {m:?}: stray zeros"))?;
                for rec in table.iter().filter(|r| r.side == side) {
                    let got = match &rec.label {
                        DivisorLabel::Horizontal(rho) => parts.horizontal_order(rho),
                        DivisorLabel::Vertical(z, v) => parts.vertical_order(z, v),
                    };
                    let want = dot(&qv(&m), &rec.image);
                    ensure(got == Some(&want), || {
                        format!("instance {i}, {}, m = {m:?}, {}: order {got:?}, table {}", side.as_str(), rec.label, fmt_q(&want))
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} divisor orders match the tables"))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let suite = sample::type1_suite(&mut rng, SUITE_SIZE);
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut ChaCha8Rng) -> Check + '_>)> = vec![
        ("flagship example", Box::new(|_| flagship())),
        ("sl2 triples", Box::new(|_| sl2_triples(&suite))),
        ("kernel identity", Box::new(|_| kernel_identity(&suite))),
        ("colored-cone round trip", Box::new(|_| round_trip(&suite))),
        ("cone-root oracle", Box::new(cone_oracle)),
        ("root certification", Box::new(|r| certification(&suite, r))),
        ("type II", Box::new(type_two)),
        ("catalog concordance", Box::new(|_| catalog(&suite))),
        ("properness", Box::new(|_| properness(&suite))),
        ("color tables", Box::new(|_| color_tables(&suite))),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        match check(&mut rng) {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{:.2?}]", k + 1, start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
