//! Independent reference values for integration tests.

#![allow(dead_code)]

use galois_ext::linalg::{Field, Matrix};

/// Augmented algebra given by its augmentation ideal: basis degrees and an
/// integer multiplication table `mult[i][j] = Σ c_k e_k`.
pub struct Augmented {
    pub degrees: Vec<usize>,
    pub mult: Vec<Vec<Vec<(i64, usize)>>>,
}

impl Augmented {
    /// `k[x]/(x^m)` with `x` in degree 1.
    pub fn truncated(m: usize) -> Self {
        let n = m - 1;
        let degrees = (1..m).collect();
        let mult = (0..n)
            .map(|i| (0..n).map(|j| if i + j + 2 < m { vec![(1, i + j + 1)] } else { vec![] }).collect())
            .collect();
        Augmented { degrees, mult }
    }

    /// `k[Z_2]` ungraded; the ideal is spanned by `u = g - 1` with `u^2 = -2u`.
    pub fn group_z2() -> Self {
        Augmented {
            degrees: vec![0],
            mult: vec![vec![vec![(-2, 0)]]],
        }
    }

    fn words(&self, n: usize, d: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w: Vec<usize>| {
                    (0..self.degrees.len()).map(move |b| {
                        let mut w = w.clone();
                        w.push(b);
                        w
                    })
                })
                .collect();
        }
        out.retain(|w| w.iter().map(|&b| self.degrees[b]).sum::<usize>() == d);
        out
    }

    /// Bar differential `B_n -> B_{n-1}` in internal degree `d`:
    /// `a_1|...|a_n -> Σ_{i<n} (-1)^i a_1|...|a_i a_{i+1}|...|a_n`.
    fn differential(&self, field: Field, n: usize, d: usize) -> (usize, usize, usize) {
        let src = self.words(n, d);
        let tgt = self.words(n - 1, d);
        if src.is_empty() || tgt.is_empty() {
            return (src.len(), tgt.len(), 0);
        }
        let mut m = Matrix::zeros(field, tgt.len(), src.len());
        for (c, w) in src.iter().enumerate() {
            for i in 0..n - 1 {
                let sign = if i % 2 == 0 { -1 } else { 1 };
                for &(k, prod) in &self.mult[w[i]][w[i + 1]] {
                    let mut v = w[..i].to_vec();
                    v.push(prod);
                    v.extend_from_slice(&w[i + 2..]);
                    let r = tgt.iter().position(|t| *t == v).expect("word of the same degree");
                    let entry = m.get(r, c) + &field.int(sign * k);
                    m.set(r, c, entry);
                }
            }
        }
        (src.len(), tgt.len(), m.rank())
    }

    /// `dim Tor_n(k, k)` in internal degree `d`, which equals `dim Ext^n(k, k)` there.
    pub fn tor(&self, field: Field, n: usize, d: usize) -> usize {
        let dim = self.words(n, d).len();
        let rank_out = if n == 0 { 0 } else { self.differential(field, n, d).2 };
        let rank_in = self.differential(field, n + 1, d).2;
        dim - rank_out - rank_in
    }
}
