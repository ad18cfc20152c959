//! One line per acceptance criterion, exact comparisons only.

use fillcurves::catalog_io::{catalog_system, catalog_text, load_catalog, parse_csf, serialize_csf};
use fillcurves::curve_system::CurveSystem;
use fillcurves::free_group::{check_pingpong_inclusion, pingpong_generator, relation_search_abstract, stallings_rank};
use fillcurves::twist_engine::{
    construct_family, relation_probe, verify_conjugation, verify_family, verify_twist_formula, verify_twist_inequality,
    TwistWord,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(n: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|_| outcome(false, "panicked"));
    println!(
        "criterion {n} [{title}]: {} ({}; {:.2}s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        t.elapsed().as_secs_f64()
    );
    o.pass
}

fn g2() -> CurveSystem {
    catalog_system("g2_i4").unwrap()
}

fn criterion1() -> Outcome {
    let t = Instant::now();
    let s = g2();
    let (a, b) = (s.curve("a").unwrap(), s.curve("b").unwrap());
    let cells = verify_twist_formula(&s, &a, &b, 3).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let values: Vec<String> = cells.iter().map(|c| format!("k={}:{}", c.k, c.computed)).collect();
    let exact = cells.iter().all(|c| c.computed == 16 * c.k.unsigned_abs());
    outcome(exact && secs < 10.0, format!("{}, {secs:.2}s", values.join(" ")))
}

fn criterion2() -> Outcome {
    let s = g2();
    let (a, b) = (s.curve("a").unwrap(), s.curve("b").unwrap());
    let mut ok = true;
    let mut notes = Vec::new();
    for d in 2..=5 {
        let (fam, r) = verify_family(&s, &a, &b, d).unwrap();
        let faces = fam.faces();
        let mut pairs_ok = true;
        for j in 0..d as usize {
            for k in j + 1..d as usize {
                let got = r.pairwise.counts[j][k];
                pairs_ok &= got == (k - j) as u64 * 16;
            }
        }
        let this = r.filling && faces.components == 1 && faces.genus == 2 && pairs_ok;
        ok &= this;
        notes.push(format!("d={d}: filling={} genus={} pairwise={}", r.filling, faces.genus, pairs_ok));
    }
    outcome(ok, notes.join("; "))
}

fn criterion3() -> Outcome {
    let s = g2();
    let (a, b) = (s.curve("a").unwrap(), s.curve("b").unwrap());
    let mut got = Vec::new();
    for d in 2..=5i64 {
        let (_, r) = verify_family(&s, &a, &b, d).unwrap();
        let formula = 16 * d * (d - 1) * (d + 1) / 6 - 2;
        got.push((r.ell as i64, formula));
    }
    let want = [14, 62, 158, 318];
    let pass = got.iter().zip(want).all(|(&(ell, formula), w)| ell == w && formula == w);
    outcome(pass, format!("l = {:?}", got.iter().map(|g| g.0).collect::<Vec<_>>()))
}

fn euler_holds(s: &CurveSystem) -> (bool, String) {
    let f = s.is_filling().unwrap();
    let table = s.intersection_table().unwrap();
    let sum = table.pair_sum() as i64;
    let rhs = 2 * s.ambient_genus() as i64 - 2 + f.face_count as i64;
    (f.filling && sum == rhs, format!("{sum}={rhs}"))
}

fn criterion4() -> Outcome {
    let mut systems: Vec<(String, CurveSystem)> = Vec::new();
    for (e, s) in load_catalog().unwrap() {
        systems.push((e.id.clone(), s));
    }
    for id in ["g2_i4", "g3_i5"] {
        let s = catalog_system(id).unwrap();
        let (a, b) = (s.curve("a").unwrap(), s.curve("b").unwrap());
        let top = if id == "g2_i4" { 5 } else { 3 };
        for d in 2..=top {
            systems.push((format!("{id}/d={d}"), construct_family(&s, &a, &b, d).unwrap()));
        }
    }
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, s) in &systems {
        let (pass, note) = euler_holds(s);
        ok &= pass;
        notes.push(format!("{name}: {note}"));
    }
    outcome(ok, format!("{} systems; {}", systems.len(), notes.join(" ")))
}

fn criterion5() -> Outcome {
    let mut pool: Vec<CurveSystem> = vec![g2(), catalog_system("g3_i5").unwrap()];
    for (id, d) in [("g2_i4", 3), ("g2_i4", 4), ("g3_i5", 2)] {
        let s = catalog_system(id).unwrap();
        let (a, b) = (s.curve("a").unwrap(), s.curve("b").unwrap());
        pool.push(construct_family(&s, &a, &b, d).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2202);
    let mut cells = Vec::new();
    for _ in 0..200 {
        let s = &pool[rng.gen_range(0..pool.len())];
        let names = s.names();
        let ai = rng.gen_range(0..names.len());
        let mut bi = rng.gen_range(0..names.len() - 1);
        if bi >= ai {
            bi += 1;
        }
        let ci = rng.gen_range(0..names.len());
        let k = [-3i64, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
        cells.push((s, names[ai].clone(), names[bi].clone(), names[ci].clone(), k));
    }
    use rayon::prelude::*;
    let results: Vec<_> = cells
        .par_iter()
        .map(|(s, a, b, c, k)| {
            let r = |n: &str| s.curve(n).unwrap();
            verify_twist_inequality(s, &r(a), &r(b), &r(c), *k).unwrap()
        })
        .collect();
    let violations: Vec<String> = results
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("T_{}^{}({}) vs {}: {} vs {}±{}", c.a, c.k, c.b, c.c, c.lhs, c.main_term, c.tolerance))
        .collect();
    let exact = results.iter().filter(|c| c.lhs == c.main_term).count();
    outcome(
        violations.is_empty(),
        format!(
            "{} cells, {} violations, {} with equality{}",
            results.len(),
            violations.len(),
            exact,
            if violations.is_empty() { String::new() } else { format!(": {}", violations.join("; ")) }
        ),
    )
}

fn criterion6() -> Outcome {
    let s = g2();
    let a = s.curve("a").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0_11a7e);
    let mut words = Vec::new();
    while words.len() < 20 {
        let len = rng.gen_range(1..=3);
        let w = TwistWord::from_letters((0..len).map(|_| {
            let c = if rng.gen_bool(0.5) { "a" } else { "b" };
            (c, if rng.gen_bool(0.5) { 1 } else { -1 })
        }));
        if !w.is_empty() && !words.contains(&w) {
            words.push(w);
        }
    }
    use rayon::prelude::*;
    let reports: Vec<_> = words.par_iter().map(|f| verify_conjugation(&s, f, &a).unwrap()).collect();
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.word.clone()).collect();
    let faces_equal = reports.iter().flat_map(|r| &r.probes).filter(|p| p.faces_equal).count();
    let probes = reports.iter().map(|r| r.probes.len()).sum::<usize>();
    outcome(
        failed.is_empty(),
        format!(
            "{} words, {probes} probes, {} words failed {:?}; face multisets equal in {faces_equal}/{probes}",
            words.len(),
            failed.len(),
            failed
        ),
    )
}

fn criterion7() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    for d in 2..=10 {
        let gens: Vec<_> = (0..d).map(|i| pingpong_generator(i).unwrap()).collect();
        let c = stallings_rank(&gens).unwrap();
        ok &= c.rank == d as usize && c.is_basis;
    }
    let mut checked = 0;
    for d in 2..=6 {
        let r = check_pingpong_inclusion(d, 3, 8).unwrap();
        ok &= r.passed();
        checked += r.checked;
    }
    let mut relations = 0;
    for d in 2..=10 {
        relations += relation_search_abstract(d, 6).unwrap().len();
    }
    ok &= relations == 0;
    let secs = t.elapsed().as_secs_f64();
    outcome(
        ok && secs < 60.0,
        format!(
            "ranks d=2..10 basis, {checked} inclusions, {relations} relations up to length 6 for d=2..10, {secs:.1}s"
        ),
    )
}

fn criterion8() -> Outcome {
    let s = g2();
    let (a, b) = (s.curve("a").unwrap(), s.curve("b").unwrap());
    let mut ok = true;
    let mut notes = Vec::new();
    for (d, len) in [(2, 6), (3, 4)] {
        let fam = construct_family(&s, &a, &b, d).unwrap();
        let r = relation_probe(&fam, &fam.curves(), len).unwrap();
        ok &= r.passed();
        notes.push(format!(
            "d={d} L={len}: {} words, {} by homology, {} by engine, {} suspicious",
            r.words_checked,
            r.certified_by_homology,
            r.checked_by_engine,
            r.suspicious.len()
        ));
    }
    outcome(ok, notes.join("; "))
}

fn criterion9() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for id in ["g2_i4", "g3_i5", "bigon_fixture"] {
        let golden = catalog_text(id).unwrap();
        let s = parse_csf(golden).unwrap();
        let round = serialize_csf(&s) == golden;
        ok &= round;
        notes.push(format!("{id}: round-trip {round}"));
    }
    for (e, s) in load_catalog().unwrap() {
        let r = s.reduce_bigons().unwrap();
        let fixed = serialize_csf(&r) == serialize_csf(&s) && s.find_bigon().unwrap().is_none();
        ok &= fixed;
        notes.push(format!("{}: reduce fixed point {fixed}", e.id));
    }
    outcome(ok, notes.join("; "))
}

fn main() {
    let results = [
        run(1, "twist intersection formula", criterion1),
        run(2, "family fills", criterion2),
        run(3, "family face counts", criterion3),
        run(4, "Euler identity", criterion4),
        run(5, "twist inequality property suite", criterion5),
        run(6, "conjugation law", criterion6),
        run(7, "free group certificates", criterion7),
        run(8, "twist relation probe", criterion8),
        run(9, "round-trip and reduction fixed point", criterion9),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
