use super::FpPoly;
use crate::arith::mul_mod;

/// A 3×3 matrix over 𝔽_p, acting on column vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Matrix3 {
    p: u64,
    rows: [[u64; 3]; 3],
}

impl Matrix3 {
    pub fn from_rows(p: u64, rows: [[u64; 3]; 3]) -> Self {
        Self {
            p,
            rows: rows.map(|r| r.map(|x| x % p)),
        }
    }

    pub fn identity(p: u64) -> Self {
        Self::from_rows(p, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> [[u64; 3]; 3] {
        self.rows
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p)
    }

    pub fn transpose(&self) -> Self {
        let r = self.rows;
        Self::from_rows(self.p, std::array::from_fn(|i| std::array::from_fn(|j| r[j][i])))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p;
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(0, |acc, k| (acc + mul_mod(self.rows[i][k], other.rows[k][j], p)) % p)
            })
        });
        Self { p, rows }
    }

    pub fn apply(&self, v: [u64; 3]) -> [u64; 3] {
        let p = self.p;
        self.rows
            .map(|r| (0..3).fold(0, |acc, k| (acc + mul_mod(r[k], v[k], p)) % p))
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::from_rows(self.p, self.rows.map(|r| r.map(|x| mul_mod(x, s, self.p))))
    }

    pub fn trace(&self) -> u64 {
        (self.rows[0][0] + self.rows[1][1] + self.rows[2][2]) % self.p
    }

    fn minor(&self, a: usize, b: usize) -> u64 {
        let p = self.p;
        let m = &self.rows;
        (mul_mod(m[a][a], m[b][b], p) + p - mul_mod(m[a][b], m[b][a], p)) % p
    }

    pub fn det(&self) -> u64 {
        let p = self.p;
        let m = &self.rows;
        let term = |i: usize, j: usize, k: usize| mul_mod(mul_mod(m[0][i], m[1][j], p), m[2][k], p);
        let pos = (term(0, 1, 2) + term(1, 2, 0) + term(2, 0, 1)) % p;
        let neg = (term(2, 1, 0) + term(0, 2, 1) + term(1, 0, 2)) % p;
        (pos + p - neg) % p
    }

    /// `det(x·I − M) = x³ − tr(M)x² + (sum of principal 2-minors)x − det(M)`.
    pub fn char_poly(&self) -> FpPoly {
        let p = self.p;
        let c2 = (self.minor(0, 1) + self.minor(0, 2) + self.minor(1, 2)) % p;
        FpPoly::new(p, vec![(p - self.det()) % p, c2, (p - self.trace()) % p, 1])
    }
}
