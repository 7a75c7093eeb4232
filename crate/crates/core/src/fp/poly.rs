use std::fmt;

use crate::arith::{inv_mod, mul_mod, pow_mod, reduce};
use crate::error::{domain, Result};

/// Dense univariate polynomial over 𝔽_p, coefficients in ascending degree.
///
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut poly = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        poly.trim();
        poly
    }

    pub fn from_signed(p: u64, coeffs: &[i128]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| reduce(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// `x − a`.
    pub fn linear_root(p: u64, a: u64) -> Self {
        Self::new(p, vec![(p - a % p) % p, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, s, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        match inv_mod(self.leading(), self.p) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return domain(format!(
                "polynomials over different fields (p = {} and p = {})",
                self.p, other.p
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|k| (self.coeff(k) + other.coeff(k)) % self.p)
            .collect();
        Ok(Self::new(self.p, c))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(self.p - 1))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.p));
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Ok(Self::new(self.p, c))
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_field(divisor)?;
        let Some(dd) = divisor.degree() else {
            return domain("polynomial division by zero");
        };
        let p = self.p;
        let inv = inv_mod(divisor.leading(), p).expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return Ok((Self::zero(p), self.clone()));
        };
        let mut quot = vec![0u64; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = mul_mod(rem[k + dd], inv, p);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - mul_mod(c, b, p)) % p;
            }
        }
        rem.truncate(dd);
        Ok((Self::new(p, quot), Self::new(p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return domain("gcd(0, 0) is undefined");
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Resultant by the Euclidean recurrence
    /// `Res(a, b) = (−1)^{deg a·deg b} · lc(b)^{deg a − deg r} · Res(b, r)`
    /// with `r = a mod b`. Zero whenever either input is the zero polynomial.
    pub fn resultant(&self, other: &Self) -> Result<u64> {
        self.same_field(other)?;
        let p = self.p;
        if self.is_zero() || other.is_zero() {
            return Ok(0);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = 1u64;
        loop {
            let m = a.degree().unwrap() as u64;
            let n = b.degree().unwrap() as u64;
            if n == 0 {
                return Ok(mul_mod(acc, pow_mod(b.leading(), m, p), p));
            }
            let r = a.rem(&b)?;
            let Some(k) = r.degree() else {
                return Ok(0);
            };
            if (m * n) % 2 == 1 {
                acc = (p - acc) % p;
            }
            acc = mul_mod(acc, pow_mod(b.leading(), m - k as u64, p), p);
            a = b;
            b = r;
        }
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && k > 0 { String::new() } else { c.to_string() };
            terms.push(match k {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{k}"),
            });
        }
        f.write_str(&terms.join(" + "))
    }
}
