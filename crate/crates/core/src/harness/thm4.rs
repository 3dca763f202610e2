//! N-Koszulity passes from the coinvariants to the Galois extension.

use super::{galois, require_hopf, ReportBuilder, Result, VerificationReport};
use crate::fixtures::Fixture;
use crate::homological::{generated_in_ext_degrees, is_n_koszul, Ext, ExtAlgebra, HomologicalError, KoszulCertificate, Resolution, Verdict};

pub fn verify_thm4(fx: &Fixture, big_n: usize, n_max: usize) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("thm4", fx, None, n_max);
    rb.data("N", big_n);
    require_hopf(&mut rb, fx, true, true);
    let gd = galois(fx)?;
    let failing: Vec<usize> = gd.galois_degrees().iter().filter(|g| !g.bijective()).map(|g| g.degree).collect();
    if !failing.is_empty() {
        rb.hypothesis(format!("A/B not graded Galois in degrees {failing:?}"));
    }
    let a = gd.algebra();
    let b = &gd.b.algebra;
    let koszul = |alg, name: &str, rb: &mut ReportBuilder| -> Result<Option<KoszulCertificate>> {
        match is_n_koszul(alg, big_n, n_max) {
            Ok(c) => {
                for v in &c.hypothesis_violations {
                    rb.hypothesis(format!("{name}: {v}"));
                }
                Ok(Some(c))
            }
            Err(HomologicalError::DegreeZeroNotSemisimple(s)) => {
                rb.hypothesis(format!("{name}_0 not semisimple ({s:?})"));
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    };
    let (Some(kb), Some(ka)) = (koszul(b, "B", &mut rb)?, koszul(a, "A", &mut rb)?) else {
        return Ok(rb.finish());
    };
    rb.data("b_certificate", &kb);
    rb.data("a_certificate", &ka);
    rb.check(
        "B Koszul implies A Koszul",
        kb.verdict != Verdict::True || ka.verdict == Verdict::True,
        Some(format!("B: {:?}, A: {:?}", kb.verdict, ka.verdict)),
    );

    if b.dim(0) == 1 {
        rb.check(
            "A Koszul implies B Koszul",
            ka.verdict != Verdict::True || kb.verdict == Verdict::True,
            Some(format!("B: {:?}, A: {:?}", kb.verdict, ka.verdict)),
        );
        let a0 = a.degree_zero_module();
        let top = a.top() as i64;
        let a0b = a0.restrict(b, &gd.b.emb);
        let res_b = Resolution::new(b, &a0b, 3)?;
        let ext_b = Ext::compute(&res_b, &a0b, 2, 0, top)?;
        let concentrated = |n: usize, deg: i64| -> Option<String> {
            (0..=top)
                .filter(|&d| d != deg)
                .find(|&d| ext_b.dim(n, d).is_none_or(|x| x > 0))
                .map(|d| format!("Ext^{n}_B in internal degree {d}: {:?}", ext_b.dim(n, d)))
        };
        let w1 = concentrated(1, 1);
        rb.check("Ext^1_B(A_0, A_0) concentrated in degree 1", w1.is_none(), w1);
        let w2 = concentrated(2, big_n as i64);
        rb.check(&format!("Ext^2_B(A_0, A_0) concentrated in degree {big_n}"), w2.is_none(), w2);
        rb.data("ext_b_table", ext_b.table());

        let res_a = Resolution::new(a, &a0, n_max + 1)?;
        let ext_a = ExtAlgebra::new(&res_a, n_max, 0, top)?;
        let (alg, _) = ext_a.ext_degree_algebra()?;
        rb.data("ext_a_dims", alg.dims());
        rb.check(
            "Ext_A(A_0, A_0) generated in ext-degrees 1 and 2",
            generated_in_ext_degrees(&alg, 2, n_max),
            None,
        );
    }
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::Field;

    const Q: Field = Field::Rationals;

    #[test]
    fn quiver_is_koszul() {
        let fx = fixtures::paper_quiver(Q, 4).unwrap();
        let r = verify_thm4(&fx, 2, 3).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert!(r.check("Ext^1_B(A_0, A_0) concentrated in degree 1").unwrap().passed);
    }

    #[test]
    fn cubic_smash_three_koszul() {
        let fx = fixtures::truncated_cubic_smash(Q, 7).unwrap();
        let r = verify_thm4(&fx, 3, 4).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert_eq!(r.data["a_certificate"]["verdict"], "True");
    }
}
