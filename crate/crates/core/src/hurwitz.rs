//! Exact arithmetic in the Hurwitz order.
//!
//! Elements are stored through their doubled coordinates `(2a, 2b, 2c, 2d)`,
//! which are all even (Lipschitz, type I) or all odd (type II). Every value
//! keeps its norm at most [`MAX_NORM`]; arithmetic that would leave that range
//! reports [`Error::Overflow`] instead of wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::{self, reduce};
use crate::error::{domain, invariant, Error, Result};

/// Upper bound on the norm of any stored element. Keeps every intermediate
/// of the Euclidean step inside `i128`.
pub const MAX_NORM: u64 = 1 << 58;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct HurwitzInt {
    d: [i64; 4],
}

/// The 24 units: ±1, ±i, ±j, ±k, then (±1±i±j±k)/2.
pub const UNITS: [HurwitzInt; 24] = {
    let mut out = [HurwitzInt { d: [0; 4] }; 24];
    let mut n = 0;
    while n < 4 {
        out[2 * n].d[n] = 2;
        out[2 * n + 1].d[n] = -2;
        n += 1;
    }
    let mut mask = 0;
    while mask < 16 {
        let mut c = 0;
        while c < 4 {
            out[8 + mask].d[c] = if mask & (1 << (3 - c)) == 0 { 1 } else { -1 };
            c += 1;
        }
        mask += 1;
    }
    out
};

/// Raw Hamilton product of two integer 4-vectors.
fn raw_product(x: &[i64; 4], y: &[i64; 4]) -> [i128; 4] {
    let [a1, b1, c1, d1] = x.map(i128::from);
    let [a2, b2, c2, d2] = y.map(i128::from);
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

fn doubled_norm(d: &[i64; 4]) -> u128 {
    d.iter().map(|&x| (x as i128 * x as i128) as u128).sum::<u128>() / 4
}

impl HurwitzInt {
    pub const ZERO: Self = Self { d: [0, 0, 0, 0] };
    pub const ONE: Self = Self { d: [2, 0, 0, 0] };
    pub const I: Self = Self { d: [0, 2, 0, 0] };
    pub const J: Self = Self { d: [0, 0, 2, 0] };
    pub const K: Self = Self { d: [0, 0, 0, 2] };

    /// Builds an element from doubled coordinates, checking parity and range.
    pub fn from_doubled(d: [i64; 4]) -> Result<Self> {
        let parity = d[0].rem_euclid(2);
        if d.iter().any(|x| x.rem_euclid(2) != parity) {
            return Err(Error::Parse(format!(
                "doubled coordinates {d:?} are not all of one parity"
            )));
        }
        let n = d
            .iter()
            .map(|&x| (x as i128 * x as i128) as u128)
            .try_fold(0u128, |acc, s| acc.checked_add(s));
        match n {
            Some(n) if n / 4 <= MAX_NORM as u128 => Ok(Self { d }),
            _ => Err(Error::Overflow(format!("norm of {d:?} exceeds 2^58"))),
        }
    }

    /// Integer-coordinate element `a + bi + cj + dk`.
    ///
    /// Panics if the norm leaves the supported range; intended for literals.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        let doubled = [a, b, c, d].map(|x| x.checked_mul(2).expect("coordinate out of range"));
        Self::from_doubled(doubled).expect("quaternion literal out of range")
    }

    /// Lifts an element from raw `i128` doubled coordinates.
    fn from_wide(d: [i128; 4]) -> Result<Self> {
        let mut out = [0i64; 4];
        for (o, x) in out.iter_mut().zip(d) {
            *o = i64::try_from(x).map_err(|_| Error::Overflow("coordinate exceeds i64".into()))?;
        }
        Self::from_doubled(out)
    }

    pub fn doubled(&self) -> [i64; 4] {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.d == [0; 4]
    }

    /// True for type (I) elements, i.e. elements of the Lipschitz order.
    pub fn is_lipschitz(&self) -> bool {
        self.d[0] % 2 == 0
    }

    /// Integer coordinates, when the element is Lipschitz.
    pub fn integer_coords(&self) -> Option<[i64; 4]> {
        self.is_lipschitz().then(|| self.d.map(|x| x / 2))
    }

    pub fn conj(&self) -> Self {
        let [a, b, c, d] = self.d;
        Self { d: [a, -b, -c, -d] }
    }

    pub fn norm(&self) -> u64 {
        doubled_norm(&self.d) as u64
    }

    /// `Tr(α) = 2·Re(α)`, which is always an integer.
    pub fn trace(&self) -> i64 {
        self.d[0]
    }

    /// Doubled real part (equal to the trace).
    pub fn real_doubled(&self) -> i64 {
        self.d[0]
    }

    /// Vector part `bi + cj + dk` in doubled coordinates. For type (II) elements
    /// the vector part is not itself a Hurwitz integer, so only the
    /// half-integer coordinates are returned.
    pub fn vector_part(&self) -> [i64; 3] {
        [self.d[1], self.d[2], self.d[3]]
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let n = self.norm() as u128 * rhs.norm() as u128;
        if n > MAX_NORM as u128 {
            return Err(Error::Overflow(format!(
                "product of norms {} and {} exceeds 2^58",
                self.norm(),
                rhs.norm()
            )));
        }
        let raw = raw_product(&self.d, &rhs.d);
        if raw.iter().any(|x| x % 2 != 0) {
            return invariant("Hurwitz product left the order");
        }
        Self::from_wide(raw.map(|x| x / 2))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let mut out = [0i128; 4];
        for (k, o) in out.iter_mut().enumerate() {
            *o = self.d[k] as i128 + rhs.d[k] as i128;
        }
        Self::from_wide(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&-*rhs)
    }

    /// Multiplies by a rational integer.
    pub fn scale(&self, m: i64) -> Result<Self> {
        Self::from_wide(self.d.map(|x| x as i128 * m as i128))
    }

    /// `self / m` when the quotient lies in the Hurwitz order.
    pub fn div_int(&self, m: i64) -> Option<Self> {
        if m == 0 || self.d.iter().any(|x| x % m != 0) {
            return None;
        }
        Self::from_doubled(self.d.map(|x| x / m)).ok()
    }

    /// `γ` with `self = divisor · γ`, if `divisor` is a left divisor.
    pub fn left_quotient(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let raw = raw_product(&divisor.conj().d, &self.d);
        exact_quotient(raw, divisor.norm())
    }

    /// `γ′` with `self = γ′ · divisor`, if `divisor` is a right divisor.
    pub fn right_quotient(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        let raw = raw_product(&self.d, &divisor.conj().d);
        exact_quotient(raw, divisor.norm())
    }

    /// True unless `self = m·β` for some integer `m > 1` and `β` in the order.
    pub fn is_primitive(&self) -> Result<bool> {
        if self.is_zero() {
            return domain("primitivity of 0 is undefined");
        }
        let g = self.d.iter().fold(0u64, |g, &x| arith::gcd(g, x.unsigned_abs()));
        let odd_part = g >> g.trailing_zeros();
        if odd_part > 1 || g >= 4 {
            return Ok(false);
        }
        // g == 2: halving gives integers, which are doubled coordinates of a
        // Hurwitz element only when they are all odd.
        Ok(!(g == 2 && self.d.iter().all(|x| (x / 2) % 2 != 0)))
    }

    /// Right Euclidean division: `self = q·divisor + r` with `N(r) < N(divisor)`.
    ///
    /// `q` is a Hurwitz integer nearest to `self·conj(divisor)/N(divisor)`;
    /// equidistant candidates resolve to the lexicographically smaller
    /// doubled tuple.
    pub fn div_round(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return domain("division by zero quaternion");
        }
        let n = divisor.norm() as i128;
        // x / (2n) is the doubled coordinate vector of the exact quotient.
        let x = raw_product(&self.d, &divisor.conj().d);
        let even = x.map(|xi| 2 * (xi + 2 * n).div_euclid(4 * n));
        let odd = x.map(|xi| 2 * xi.div_euclid(4 * n) + 1);
        let dist = |q: &[i128; 4]| -> i128 {
            q.iter().zip(&x).map(|(qi, xi)| (2 * n * qi - xi).pow(2)).sum()
        };
        let q = match dist(&even).cmp(&dist(&odd)) {
            Ordering::Less => even,
            Ordering::Greater => odd,
            Ordering::Equal => even.min(odd),
        };
        let q = Self::from_wide(q)?;
        let r = self.checked_sub(&q.checked_mul(divisor)?)?;
        if r.norm() >= divisor.norm() {
            return invariant(format!(
                "remainder {r} of {self} by {divisor} has norm {} >= {}",
                r.norm(),
                divisor.norm()
            ));
        }
        Ok((q, r))
    }

    /// Greatest common right divisor: `ℋa + ℋb = ℋδ`.
    pub fn gcrd(a: &Self, b: &Self) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return domain("gcrd(0, 0) is undefined");
        }
        let (mut a, mut b) = (*a, *b);
        while !b.is_zero() {
            let (_, r) = a.div_round(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Greatest common left divisor: `aℋ + bℋ = δℋ`.
    pub fn gcld(a: &Self, b: &Self) -> Result<Self> {
        Ok(Self::gcrd(&a.conj(), &b.conj())?.conj())
    }

    /// The 24 left associates `u·self`, in [`UNITS`] order.
    pub fn left_associates(&self) -> [Self; 24] {
        // unit multiplication preserves the norm, so it never overflows
        UNITS.map(|u| Self::from_wide(raw_product(&u.d, &self.d).map(|x| x / 2)).unwrap())
    }

    /// Minimal left associate under lexicographic order of doubled coordinates.
    pub fn canonical_left_associate(&self) -> Self {
        self.left_associates().into_iter().min().unwrap()
    }

    /// Coordinates `(a, b, c, d)` reduced into 𝔽_p, halves resolved by `2⁻¹`.
    pub fn reduce_mod(&self, p: u64) -> [u64; 4] {
        let half = (p + 1) / 2;
        self.d.map(|x| arith::mul_mod(reduce(x as i128, p), half, p))
    }

    /// True when the element is congruent to a rational integer modulo `p`.
    pub fn is_scalar_mod(&self, p: u64) -> bool {
        self.d[1..].iter().all(|&x| x.rem_euclid(p as i64) == 0)
    }
}

fn exact_quotient(raw: [i128; 4], n: u64) -> Option<HurwitzInt> {
    // raw / 4 is the true product, so doubled quotient coordinates are raw / (2n)
    let m = 2 * n as i128;
    if raw.iter().any(|x| x % m != 0) {
        return None;
    }
    HurwitzInt::from_wide(raw.map(|x| x / m)).ok()
}

impl Neg for HurwitzInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self { d: self.d.map(|x| -x) }
    }
}

impl Mul for HurwitzInt {
    type Output = Self;
    /// Panics on overflow; use [`HurwitzInt::checked_mul`] for untrusted sizes.
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("quaternion product overflow")
    }
}

impl Add for HurwitzInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("quaternion sum overflow")
    }
}

impl Sub for HurwitzInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("quaternion difference overflow")
    }
}

impl fmt::Display for HurwitzInt {
    /// Literal format `a,b,c,d`, with halves written `n/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = if self.is_lipschitz() {
            self.d.iter().map(|x| (x / 2).to_string()).collect()
        } else {
            self.d.iter().map(|x| format!("{x}/2")).collect()
        };
        f.write_str(&parts.join(","))
    }
}

impl FromStr for HurwitzInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected four coordinates in {s:?}")));
        }
        let mut d = [0i64; 4];
        for (slot, part) in d.iter_mut().zip(&parts) {
            let bad = || Error::Parse(format!("bad coordinate {part:?}"));
            *slot = match part.strip_suffix("/2") {
                Some(num) => num.trim().parse::<i64>().map_err(|_| bad())?,
                None => part
                    .parse::<i64>()
                    .map_err(|_| bad())?
                    .checked_mul(2)
                    .ok_or_else(|| Error::Overflow(format!("coordinate {part}")))?,
            };
        }
        Self::from_doubled(d)
    }
}

impl Serialize for HurwitzInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
