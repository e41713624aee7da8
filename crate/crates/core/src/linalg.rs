//! Exact linear algebra: ranks over prime fields, fraction-free rank over the
//! integers, multimodular rank, and affine solving over `F_p`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `a^e mod m` for `m < 2^32`.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for `n < 2^32` (bases 2, 7, 61).
pub fn is_prime_u32(n: u32) -> bool {
    let n = n as u64;
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 61] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 7, 61] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^31`, largest first.
pub fn large_primes() -> impl Iterator<Item = u32> {
    (1u32 << 30..1u32 << 31).rev().filter(|&n| is_prime_u32(n))
}

/// `x mod p` for a big integer, lifted to `0..p`.
pub fn big_mod(x: &BigInt, p: u32) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.iter_u32_digits().next().unwrap_or(0) as u64
}

/// A dense matrix over `F_q`, `q < 2^31`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    q: u64,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, q: u32) -> Self {
        ModMatrix { rows, cols, q: q as u64, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<u64>], q: u32) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols, q);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.q as u32
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.q;
    }

    /// Rank by Gaussian elimination; consumes the matrix.
    pub fn rank(mut self) -> usize {
        let (q, cols) = (self.q, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == self.rows {
                break;
            }
            let Some(piv) = (rank..self.rows).find(|&i| self.data[i * cols + c] != 0) else { continue };
            if piv != rank {
                for j in c..cols {
                    self.data.swap(piv * cols + j, rank * cols + j);
                }
            }
            let inv = pow_mod(self.data[rank * cols + c], q - 2, q);
            for j in c..cols {
                let k = rank * cols + j;
                self.data[k] = self.data[k] * inv % q;
            }
            for i in rank + 1..self.rows {
                let f = self.data[i * cols + c];
                if f == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = f * self.data[rank * cols + j] % q;
                    let k = i * cols + j;
                    self.data[k] = (self.data[k] + q - sub) % q;
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Rank over `Q` by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(piv, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Exact rank over `Q` of an integer matrix given only through its
/// reductions, with `bound_sq` at least the square of every minor.
///
/// A prime can only lower the rank if it divides a nonzero maximal minor,
/// so once the product of the primes used exceeds the Hadamard bound the
/// largest modular rank seen is the rational rank.
pub fn multimodular_rank<F>(max_rank: usize, bound_sq: &BigInt, mut reduce: F) -> usize
where
    F: FnMut(u32) -> ModMatrix,
{
    let mut best = 0;
    let mut prod_sq = BigInt::one();
    for q in large_primes() {
        best = best.max(reduce(q).rank());
        if best == max_rank {
            return best;
        }
        prod_sq *= BigInt::from(q) * BigInt::from(q);
        if prod_sq > *bound_sq {
            return best;
        }
    }
    unreachable!("ran out of 31-bit primes")
}

/// Square of the Hadamard bound `Π_i max(1, ‖row_i‖)` for every minor.
pub fn hadamard_bound_sq(rows: &[Vec<BigInt>]) -> BigInt {
    let mut b = BigInt::one();
    for r in rows {
        let n: BigInt = r.iter().map(|x| x * x).sum();
        if n > BigInt::one() {
            b *= n;
        }
    }
    b
}

/// Reduced row echelon form over `F_p` in place; returns the pivot columns.
pub fn rref_mod(m: &mut [Vec<u32>], p: u32) -> Vec<usize> {
    let q = p as u64;
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] % p != 0) else { continue };
        m.swap(piv, r);
        let inv = pow_mod(m[r][c] as u64, q - 2, q);
        for x in m[r].iter_mut() {
            *x = ((*x as u64) * inv % q) as u32;
        }
        for i in 0..rows {
            if i == r || m[i][c] == 0 {
                continue;
            }
            let f = m[i][c] as u64;
            for j in 0..cols {
                let sub = f * m[r][j] as u64 % q;
                m[i][j] = ((m[i][j] as u64 + q - sub) % q) as u32;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m = rows.to_vec();
    rref_mod(&mut m, p).len()
}

/// Solution set `x0 + span(kernel)` of `A·x = b` over `F_p`, or `None`.
///
/// `x0` has its free coordinates set to zero; kernel vector `k` has a one in
/// the `k`-th free coordinate and zeros in the others.
pub fn solve_affine_mod(a: &[Vec<u32>], b: &[u32], p: u32) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
    let n = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| r.iter().map(|x| x % p).chain(core::iter::once(bi % p)).collect())
        .collect();
    let pivots = rref_mod(&mut aug, p);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x0 = vec![0u32; n];
    for (r, &c) in pivots.iter().enumerate() {
        x0[c] = aug[r][n];
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = (p - aug[r][f]) % p;
            }
            v
        })
        .collect();
    Some((x0, kernel))
}
