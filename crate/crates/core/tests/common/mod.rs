//! Independent oracles for the acceptance suite. Everything here is
//! implemented from scratch on plain integer vectors so that it shares no
//! code path with the library's linear algebra.

use sphadj::{ChainComplex, ChainMap, Matrix};

/// Plain row-major matrix over F_p used only by the oracles.
#[derive(Debug, Clone)]
pub struct Raw {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<u64>,
}

impl Raw {
    pub fn from_matrix(m: &Matrix) -> Raw {
        Raw {
            p: m.modulus(),
            rows: m.rows(),
            cols: m.cols(),
            e: m.entries().to_vec(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.e[i * self.cols + j]
    }

    pub fn multiply(&self, other: &Raw) -> Raw {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let mut e = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    e[idx] = (e[idx] + a * other.get(k, j)) % self.p;
                }
            }
        }
        Raw { p: self.p, rows: self.rows, cols: other.cols, e }
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }

    pub fn hstack(&self, other: &Raw) -> Raw {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut e = vec![0u64; self.rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                e[i * cols + j] = self.get(i, j);
            }
            for j in 0..other.cols {
                e[i * cols + self.cols + j] = other.get(i, j);
            }
        }
        Raw { p: self.p, rows: self.rows, cols, e }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid, independent of the library's Fermat-based inverse
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(p as i64) as u64
}

/// Gaussian-elimination rank via the nullity, written independently of
/// Matrix::rank.
pub fn rank(m: &Raw) -> usize {
    m.cols - kernel(m).cols
}

/// Kernel basis as columns, independent implementation.
pub fn kernel(m: &Raw) -> Raw {
    let p = m.p;
    let (rows, cols) = (m.rows, m.cols);
    let mut work = m.e.clone();
    let at = |w: &Vec<u64>, i: usize, j: usize| w[i * cols + j];
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(pr) = (r..rows).find(|&q| at(&work, q, col) != 0) else {
            continue;
        };
        for j in 0..cols {
            work.swap(r * cols + j, pr * cols + j);
        }
        let inv = inv_mod(at(&work, r, col), p);
        for j in 0..cols {
            work[r * cols + j] = work[r * cols + j] * inv % p;
        }
        for q in 0..rows {
            if q != r && at(&work, q, col) != 0 {
                let f = at(&work, q, col);
                for j in 0..cols {
                    work[q * cols + j] =
                        (work[q * cols + j] + (p - f) * work[r * cols + j]) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kcols = free.len();
    let mut e = vec![0u64; cols * kcols];
    for (kidx, &fc) in free.iter().enumerate() {
        e[fc * kcols + kidx] = 1;
        for (prow, &pc) in pivots.iter().enumerate() {
            e[pc * kcols + kidx] = (p - at(&work, prow, fc)) % p;
        }
    }
    Raw { p, rows: cols, cols: kcols, e }
}

/// Independent quasi-isomorphism oracle: in every degree the two homologies
/// have equal dimension and the induced map has full homological rank.
pub fn oracle_is_qis(f: &ChainMap) -> bool {
    let src = f.source();
    let tgt = f.target();
    let degrees: std::collections::BTreeSet<i64> = src
        .support()
        .into_iter()
        .chain(tgt.support())
        .flat_map(|i| [i - 1, i, i + 1])
        .collect();
    for &i in &degrees {
        let zs = kernel(&Raw::from_matrix(&src.differential(i)));
        let zt = kernel(&Raw::from_matrix(&tgt.differential(i)));
        let bs = Raw::from_matrix(&src.differential(i + 1));
        let bt = Raw::from_matrix(&tgt.differential(i + 1));
        let hs = zs.cols - rank(&bs);
        let ht = zt.cols - rank(&bt);
        if hs != ht {
            return false;
        }
        let image = Raw::from_matrix(&f.component(i)).multiply(&zs);
        let induced = rank(&bt.hstack(&image)) - rank(&bt);
        if induced != hs {
            return false;
        }
    }
    true
}

/// Re-check d∘d = 0 with the independent multiply.
pub fn oracle_d_squared_zero(c: &ChainComplex) -> bool {
    c.support().into_iter().all(|i| {
        let d1 = Raw::from_matrix(&c.differential(i));
        let d0 = Raw::from_matrix(&c.differential(i - 1));
        d0.multiply(&d1).is_zero()
    })
}

/// Independent graded homology dimensions.
pub fn oracle_homology(c: &ChainComplex) -> std::collections::BTreeMap<i64, usize> {
    let mut out = std::collections::BTreeMap::new();
    for i in c.support() {
        let z = kernel(&Raw::from_matrix(&c.differential(i))).cols;
        let b = rank(&Raw::from_matrix(&c.differential(i + 1)));
        if z > b {
            out.insert(i, z - b);
        }
    }
    out
}
