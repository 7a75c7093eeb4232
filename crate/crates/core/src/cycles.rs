//! Cycle structure of the metacommutation map and its predictions.
//!
//! Three engines are kept independent of each other:
//! the empirical decomposition of a computed [`Permutation`], the cyclotomic
//! criterion (`gcd(f_{ξ,p}, Φ_t) ≠ 1`, or equivalently a vanishing
//! resultant), and the multiplicative order of a root of `f_{ξ,p}` in
//! 𝔽_p or 𝔽_{p²}. Any disagreement surfaces as [`Error::Theorem`].

use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{divisors, inv_mod, mul_mod, pow_mod, prime_factors, reduce, sqrt_mod};
use crate::error::{domain, Error, Result};
use crate::fp::{alpha, check_prime_pair, cyclotomic, f_poly, legendre, FpPoly};
use crate::hurwitz::HurwitzInt;
use crate::metacommute::Permutation;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CycleStructure {
    pub fixed_count: usize,
    /// Common length of the non-trivial cycles; `None` for the identity.
    pub cycle_length: Option<u64>,
    pub cycle_count: usize,
    pub sign: i8,
}

/// Parity of a permutation: `(−1)^{n − #cycles}`.
pub fn permutation_sign(perm: &Permutation) -> i8 {
    if (perm.len() - perm.cycles().len()) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Decomposes `perm`, failing if two non-trivial cycles differ in length.
pub fn cycle_structure(perm: &Permutation) -> Result<CycleStructure> {
    let cycles = perm.cycles();
    let fixed_count = cycles.iter().filter(|c| c.len() == 1).count();
    let mut length = None;
    let mut cycle_count = 0;
    for c in cycles.iter().filter(|c| c.len() > 1) {
        match length {
            None => length = Some(c.len() as u64),
            Some(l) if l != c.len() as u64 => {
                return Err(Error::Theorem(format!(
                    "non-trivial cycles of lengths {l} and {} for p = {}",
                    c.len(),
                    perm.p
                )))
            }
            _ => {}
        }
        cycle_count += 1;
    }
    Ok(CycleStructure {
        fixed_count,
        cycle_length: length,
        cycle_count,
        sign: permutation_sign(perm),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FixedPrediction {
    /// `ξ` is congruent to a rational integer mod `p`; every class is fixed.
    Identity,
    Count(u8),
}

impl fmt::Display for FixedPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity => f.write_str("identity"),
            Self::Count(n) => write!(f, "{n}"),
        }
    }
}

impl Serialize for FixedPrediction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Identity => s.serialize_str("identity"),
            Self::Count(n) => s.serialize_u8(*n),
        }
    }
}

/// Fixed points of `τ_{ξ,p}`: the identity when `ξ` is scalar mod `p`,
/// otherwise `1 + ((Tr(ξ)² − 4q)/p)`.
pub fn predicted_fixed_count(xi: &HurwitzInt, p: u64) -> Result<FixedPrediction> {
    check_prime_pair(xi, p)?;
    if xi.is_scalar_mod(p) {
        return Ok(FixedPrediction::Identity);
    }
    let tr = xi.trace() as i128;
    let disc = tr * tr - 4 * xi.norm() as i128;
    Ok(FixedPrediction::Count((1 + legendre(disc, p)?) as u8))
}

/// Lengths a non-trivial cycle can have: `p` and the divisors `t > 1` of
/// `p − 1` and `p + 1`, ascending.
pub fn admissible_lengths(p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = divisors(p - 1)
        .into_iter()
        .chain(divisors(p + 1))
        .chain([p])
        .filter(|&t| t > 1)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn is_admissible_length(t: u64, p: u64) -> bool {
    t > 1 && (t == p || (p - 1) % t == 0 || (p + 1) % t == 0)
}

fn check_non_identity(xi: &HurwitzInt, p: u64) -> Result<()> {
    check_prime_pair(xi, p)?;
    if xi.is_scalar_mod(p) {
        return domain(format!("{xi} is congruent to an integer mod {p}; τ is the identity"));
    }
    Ok(())
}

fn is_parabolic(f: &FpPoly) -> bool {
    let p = f.modulus();
    *f == FpPoly::new(p, vec![1, p - 2, 1])
}

/// `gcd(f_{ξ,p}, Φ_t) ≠ 1`.
pub fn gcd_check(xi: &HurwitzInt, p: u64, t: u64) -> Result<bool> {
    Ok(!f_poly(xi, p)?.gcd(&cyclotomic(t, p)?)?.is_one())
}

/// `Res(f_{ξ,p}, Φ_t) ≡ 0 (mod p)`.
pub fn resultant_check(xi: &HurwitzInt, p: u64, t: u64) -> Result<bool> {
    check_non_identity(xi, p)?;
    Ok(f_poly(xi, p)?.resultant(&cyclotomic(t, p)?)? == 0)
}

/// Length of the non-trivial cycles of `τ_{ξ,p}` from the cyclotomic
/// criterion: `p` when `f_{ξ,p} = (x − 1)²`, otherwise the unique divisor
/// `t > 1` of `p ∓ 1` (by the fixed-point count) with `gcd(f_{ξ,p}, Φ_t) ≠ 1`.
pub fn predicted_cycle_length(xi: &HurwitzInt, p: u64) -> Result<u64> {
    check_non_identity(xi, p)?;
    let f = f_poly(xi, p)?;
    if is_parabolic(&f) {
        return Ok(p);
    }
    let group = match predicted_fixed_count(xi, p)? {
        FixedPrediction::Count(2) => p - 1,
        FixedPrediction::Count(0) => p + 1,
        other => {
            return Err(Error::Theorem(format!(
                "f = {f} is not (x−1)² but {other} fixed points are predicted for {xi}, p = {p}"
            )))
        }
    };
    let mut hits = Vec::new();
    for t in divisors(group).into_iter().filter(|&t| t > 1) {
        if !f.gcd(&cyclotomic(t, p)?)?.is_one() {
            hits.push(t);
        }
    }
    match hits.as_slice() {
        [t] => Ok(*t),
        _ => Err(Error::Theorem(format!(
            "f = {f} shares a factor with Φ_t for t in {hits:?} (p = {p}, ξ = {xi})"
        ))),
    }
}

/// The congruence criteria for lengths 2, 3, 4 and 6:
/// `Tr(ξ) ≡ 0`, `N ≡ Tr²`, `2N ≡ Tr²`, `3N ≡ Tr²` (mod p).
///
/// A length that cannot occur for `p` (6 when `p = 3`) is reported false;
/// there `Φ_6 ≡ (x + 1)²` and the congruence coincides with the length-2 one.
pub fn closed_form_criterion(t: u64, xi: &HurwitzInt, p: u64) -> Result<bool> {
    check_non_identity(xi, p)?;
    let tr = reduce(xi.trace() as i128, p);
    let tr2 = mul_mod(tr, tr, p);
    let q = xi.norm() % p;
    let holds = match t {
        2 => tr == 0,
        3 => q == tr2,
        4 => (2 * q) % p == tr2,
        6 => (3 * q) % p == tr2,
        _ => return domain(format!("no closed-form criterion for length {t}")),
    };
    Ok(holds && is_admissible_length(t, p))
}

/// `α² − α − 1 ≡ 0 (mod p)` with `α = 2 − Tr(ξ)²/N(ξ)`.
pub fn length5_condition(xi: &HurwitzInt, p: u64) -> Result<bool> {
    check_non_identity(xi, p)?;
    let a = alpha(xi, p)?;
    Ok((mul_mod(a, a, p) + 2 * p - a - 1) % p == 0)
}

/// Element of 𝔽_p[s]/(s² − D): `u + v·s`.
#[derive(Clone, Copy, PartialEq, Eq)]
struct QuadExt {
    u: u64,
    v: u64,
}

fn ext_mul(x: QuadExt, y: QuadExt, d: u64, p: u64) -> QuadExt {
    QuadExt {
        u: (mul_mod(x.u, y.u, p) + mul_mod(mul_mod(x.v, y.v, p), d, p)) % p,
        v: (mul_mod(x.u, y.v, p) + mul_mod(x.v, y.u, p)) % p,
    }
}

fn ext_pow(mut base: QuadExt, mut e: u64, d: u64, p: u64) -> QuadExt {
    let mut acc = QuadExt { u: 1, v: 0 };
    while e > 0 {
        if e & 1 == 1 {
            acc = ext_mul(acc, base, d, p);
        }
        base = ext_mul(base, base, d, p);
        e >>= 1;
    }
    acc
}

/// Order of an element in a cyclic group of order `n`, given `x ↦ x^k == 1`.
fn element_order(n: u64, is_one_at: impl Fn(u64) -> bool) -> u64 {
    let mut ord = n;
    for r in prime_factors(n) {
        while ord % r == 0 && is_one_at(ord / r) {
            ord /= r;
        }
    }
    ord
}

/// Multiplicative order of a root `λ` of the monic quadratic `f`, computed in
/// 𝔽_p when `f` splits and in 𝔽_{p²} otherwise.
///
/// Not applicable to `f = (x − 1)²`, whose cycle length `p` comes from the
/// unipotent case rather than a root order.
pub fn root_order_oracle(f: &FpPoly) -> Result<u64> {
    let p = f.modulus();
    if f.degree() != Some(2) || f.leading() != 1 {
        return domain(format!("{f} is not a monic quadratic"));
    }
    if is_parabolic(f) {
        return domain("root order is not applicable to (x − 1)²");
    }
    let (c, b) = (f.coeff(0), f.coeff(1));
    if c == 0 {
        return domain(format!("{f} has the root 0"));
    }
    let half = inv_mod(2, p).unwrap();
    let disc = (mul_mod(b, b, p) + p - mul_mod(4, c, p)) % p;
    let neg_b = (p - b) % p;
    match sqrt_mod(disc, p) {
        Some(s) => {
            let lambda = mul_mod((neg_b + s) % p, half, p);
            Ok(element_order(p - 1, |k| pow_mod(lambda, k, p) == 1))
        }
        None => {
            let lambda = QuadExt {
                u: mul_mod(neg_b, half, p),
                v: half,
            };
            let one = QuadExt { u: 1, v: 0 };
            Ok(element_order(p * p - 1, |k| ext_pow(lambda, k, disc, p) == one))
        }
    }
}

/// Everything the predictors say about `(ξ, p)`, without building the
/// permutation.
#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    pub p: u64,
    pub xi: HurwitzInt,
    pub q: u64,
    pub fixed_count: FixedPrediction,
    pub length: Option<u64>,
    pub cycle_count: Option<u64>,
    pub sign: i8,
    pub f_poly: String,
    pub matched_cyclotomic_t: Option<u64>,
}

pub fn predict(xi: &HurwitzInt, p: u64) -> Result<Prediction> {
    check_prime_pair(xi, p)?;
    let fixed = predicted_fixed_count(xi, p)?;
    let f = f_poly(xi, p)?;
    let sign = legendre(xi.norm() as i128, p)?;
    let (length, cycle_count) = match fixed {
        FixedPrediction::Identity => (None, None),
        FixedPrediction::Count(k) => {
            let l = predicted_cycle_length(xi, p)?;
            (Some(l), Some((p + 1 - k as u64) / l))
        }
    };
    Ok(Prediction {
        p,
        xi: *xi,
        q: xi.norm(),
        fixed_count: fixed,
        length,
        cycle_count,
        sign,
        f_poly: f.to_string(),
        matched_cyclotomic_t: length,
    })
}
