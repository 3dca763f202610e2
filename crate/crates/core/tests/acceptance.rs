//! One line per acceptance criterion; exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::Augmented;
use galois_ext::fixtures::{self, Fixture};
use galois_ext::graded::{AlgebraPresentation, GradedAlgebra, GradedModule, PathRef};
use galois_ext::harness::{self, Mode, VerificationReport};
use galois_ext::homological::{is_n_koszul, Ext, Resolution, Verdict};
use galois_ext::linalg::{kron_vec, Field};

const Q: Field = Field::Rationals;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn passed(r: &VerificationReport) -> Result<(), String> {
    ensure(r.passed(), format!("{} {:?}: {:?} {:?}", r.tag, r.status(), r.witnesses, r.hypothesis_violations))
}

fn quiver(top: usize) -> Result<Fixture, String> {
    fixtures::paper_quiver(Q, top).map_err(|e| e.to_string())
}

fn kz2() -> Result<Fixture, String> {
    fixtures::group_algebra(2, Q).map_err(|e| e.to_string())
}

fn c1_quiver_fixture() -> Outcome {
    let fx = quiver(5)?;
    let gh = fx.graded_hopf.as_ref().ok_or("no graded Hopf structure")?;
    ensure(gh.verify_axioms().passed(), "graded Hopf axioms fail")?;
    let h = fx.hopf();
    let g = fixtures::quiver_group_like(Q);
    ensure(h.dim() == 2, "dim H != 2")?;
    ensure(h.comul(&g) == kron_vec(&g, &g) && h.mul(&g, &g) == *h.unit(), "e_0 - e_1 is not a group-like involution")?;
    ensure(h.is_semisimple().unwrap() && h.is_cosemisimple().unwrap(), "H not semisimple and cosemisimple")?;
    let b = &fx.galois().b.algebra;
    ensure(b.dims() == [1, 2, 3, 4, 5, 6], format!("dim B = {:?}", b.dims()))?;
    ensure(b.is_commutative(), "B not commutative")?;
    let degrees = fx.galois().galois_degrees();
    ensure(degrees.len() == 6 && degrees.iter().all(|g| g.bijective()), "Galois map not bijective")?;
    for (name, alg) in [("B", b), ("A", fx.algebra())] {
        let c = is_n_koszul(alg, 2, 4).map_err(|e| e.to_string())?;
        ensure(c.verdict == Verdict::True, format!("is_N_koszul({name}, 2, 4) = {:?}", c.verdict))?;
    }
    Ok("axioms pass, H = kZ_2 (semi)simple, dim B = 1..6 commutative, beta bijective in degrees 0..5, A and B 2-Koszul to n = 4".into())
}

fn c2_thm1_strong() -> Outcome {
    let r = harness::verify_thm1(&kz2()?, "A", 4, Mode::Map).map_err(|e| e.to_string())?;
    passed(&r)?;
    for name in ["phi multiplicative", "phi bijective on Hom"] {
        ensure(r.check(name).is_some_and(|c| c.passed), format!("{name} missing or failed"))?;
    }
    let cell = &r.data["cells"][0];
    ensure(cell["n"] == 0 && cell["lhs"] == 8 && cell["rhs"] == 8, format!("ext-degree 0 cell {cell}"))?;
    Ok(format!("phi multiplicative on {} basis pairs, bijective, dim 8 = 8 in ext-degree 0", r.data["multiplicative_pairs"]))
}

fn c3_cor1() -> Outcome {
    let r = harness::verify_cor1(&quiver(5)?, "A0", 2, 20).map_err(|e| e.to_string())?;
    passed(&r)?;
    let cells = r.data["cells"].as_array().ok_or("no cells")?;
    let mut b = Vec::new();
    let mut a = Vec::new();
    for c in cells {
        let (n, d) = (c["n"].as_u64().unwrap(), c["d"].as_i64().unwrap());
        ensure(c["ext_b"] == c["smash"], format!("cell ({n},{d}): {c}"))?;
        if c["ext_b"].as_u64().unwrap() > 0 {
            ensure(n as i64 == d, format!("off-diagonal cell ({n},{d})"))?;
            b.push(c["ext_b"].as_u64().unwrap());
            a.push(c["ext_a"].as_u64().unwrap());
        }
    }
    ensure(b == [4, 8, 4] && a == [2, 4, 2], format!("Ext_B {b:?}, Ext_A {a:?}"))?;
    ensure(r.window.d_max == 5, "window")?;
    Ok(format!(
        "Ext_B (4,8,4) = Ext_A (2,4,2) x 2 for n <= 2, d <= 5; multiplicative on {} sampled pairs",
        r.data["multiplicative_pairs"]
    ))
}

fn c4_thm3() -> Outcome {
    let verdicts = |fx: &Fixture, m: &str| {
        let r = harness::verify_thm3(fx, m, 3).map_err(|e| e.to_string())?;
        passed(&r)?;
        harness::thm3_verdicts(&r).ok_or_else(|| "no verdicts".to_string())
    };
    let fx = kz2()?;
    let pos = verdicts(&fx, "A")?;
    ensure(pos.add && pos.end && pos.ext, format!("M = A: {pos:?}"))?;
    let neg = verdicts(&fx, "k")?;
    ensure(!neg.add && !neg.end && !neg.ext, format!("M = k: {neg:?}"))?;
    Ok("M = A: (true, true, true); kZ_2, B = k, M = k: (false, false, false)".into())
}

fn c5_lem2() -> Outcome {
    let mut triples = Vec::new();
    for (fx, m) in [(kz2()?, "A"), (quiver(5)?, "A0")] {
        let r = harness::verify_lem2(&fx, m, 2, 10).map_err(|e| e.to_string())?;
        passed(&r)?;
        triples.push(format!("{}: {} triples", fx.id, r.data["sampled_triples"]));
    }
    Ok(format!("xi bijective, differential-compatible and bimodule-linear ({})", triples.join(", ")))
}

fn compare_with_bar(name: &str, a: &GradedAlgebra, k: &GradedModule, bar: &Augmented, d_max: usize) -> Result<(), String> {
    let res = Resolution::new(a, k, 5).map_err(|e| e.to_string())?;
    let ext = Ext::compute(&res, k, 4, 0, d_max as i64).map_err(|e| e.to_string())?;
    for n in 0..=4 {
        for d in 0..=d_max {
            let (mine, oracle) = (ext.dim(n, d as i64), bar.tor(Q, n, d));
            ensure(mine == Some(oracle), format!("{name} ({n},{d}): {mine:?} vs {oracle}"))?;
        }
    }
    Ok(())
}

fn c6_bar_oracle() -> Outcome {
    for m in [2, 3] {
        let a = AlgebraPresentation::truncated_polynomial(m).realize(Q, 3 * m).map_err(|e| e.to_string())?;
        compare_with_bar(&format!("k[x]/(x^{m})"), &a, &a.degree_zero_module(), &Augmented::truncated(m), 3 * m)?;
    }
    let fx = kz2()?;
    compare_with_bar("kZ_2", fx.algebra(), fx.module("k").ok_or("no k")?, &Augmented::group_z2(), 0)?;
    Ok("k[x]/(x^2), k[x]/(x^3), kZ_2 agree with the bar complex for n <= 4".into())
}

fn c7_invariants() -> Outcome {
    let mut images = fixtures::quiver_hopf_images(Q);
    let x0 = images.antipode.iter_mut().find(|(g, _)| *g == PathRef::Arrows(vec![0])).ok_or("no S(x0)")?;
    x0.1[0].0 = Q.one();
    let gh = fixtures::quiver_graded_hopf(Q, 2, &images).map_err(|e| e.to_string())?;
    let report = gh.verify_axioms();
    let c = report.check("antipode").ok_or("no antipode check")?;
    ensure(!c.passed && c.witness.as_deref() == Some("x0"), format!("flipped S(x0): {c:?}"))?;
    let all = [
        quiver(5)?,
        kz2()?,
        fixtures::truncated_cubic_smash(Q, 6).map_err(|e| e.to_string())?,
        fixtures::polynomial_smash(Q, 4).map_err(|e| e.to_string())?,
    ];
    for fx in &all {
        ensure(fx.galois().verify_translation_identities().passed(), format!("Galois identities fail on {}", fx.id))?;
    }
    let r = harness::verify_invariants_identity(&all[0], "A", 2, 100).map_err(|e| e.to_string())?;
    passed(&r)?;
    let samples = r.data["module_algebra_samples"].as_u64().unwrap_or(0);
    ensure(samples >= 100, format!("only {samples} module-algebra samples"))?;
    ensure(r.check("Hom_A equals invariants of Hom_B").is_some_and(|c| c.passed), "Hom_A != (Hom_B)^H")?;
    Ok(format!("flipped S(x0) caught with witness x0; identities on {} fixtures; module-algebra law on {samples} samples; Hom_A = (Hom_B)^H", all.len()))
}

fn c8_cubic() -> Outcome {
    let a = AlgebraPresentation::truncated_polynomial(3).realize(Q, 9).map_err(|e| e.to_string())?;
    let three = is_n_koszul(&a, 3, 4).map_err(|e| e.to_string())?;
    ensure(three.verdict == Verdict::True, format!("3-Koszul: {:?}", three.verdict))?;
    let two = is_n_koszul(&a, 2, 4).map_err(|e| e.to_string())?;
    ensure(two.verdict == Verdict::False, format!("2-Koszul: {:?}", two.verdict))?;
    let gens = &three.generator_degrees[2..];
    ensure(gens == [vec![3], vec![4], vec![6]], format!("generator degrees {gens:?}"))?;
    Ok(format!("3-Koszul certified, 2-Koszul refuted at n = {:?}, generator degrees (3,4,6)", two.witness.unwrap_or(0)))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("1 quiver fixture", c1_quiver_fixture, 60),
        ("2 thm1 strong mode", c2_thm1_strong, 5),
        ("3 cor1 on the quiver", c3_cor1, 120),
        ("4 thm3 verdicts", c4_thm3, 10),
        ("5 lem2 xi on resolutions", c5_lem2, 30),
        ("6 bar-resolution oracle", c6_bar_oracle, 60),
        ("7 invariant checks", c7_invariants, 60),
        ("8 k[x]/(x^3)", c8_cubic, 60),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failures = 0;
    for (name, run, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        let in_time = t <= Duration::from_secs(limit);
        let (ok, msg) = match outcome {
            Ok(m) if in_time => (true, m),
            Ok(m) => (false, format!("{m}; too slow")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "{} criterion {name}: {msg} [{:.2}s / {limit}s]",
            if ok { "PASS" } else { "FAIL" },
            t.as_secs_f64()
        );
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
