//! Arithmetic over 𝔽_p: Legendre symbols, dense polynomials, cyclotomic
//! polynomials, and the quadratic and 3×3 matrix attached to a prime `ξ`.

mod cyclotomic;
mod matrix;
mod poly;

pub use cyclotomic::{cyclotomic, cyclotomic_integer};
pub use matrix::Matrix3;
pub use poly::FpPoly;

use crate::arith::{check_odd_prime, inv_mod, mul_mod, pow_mod, reduce};
use crate::error::{domain, Result};
use crate::hurwitz::HurwitzInt;

/// Legendre symbol `(n/p)` by Euler's criterion.
pub fn legendre(n: i128, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    Ok(match pow_mod(reduce(n, p), (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// `q⁻¹ mod p` for `q = N(ξ)`.
fn norm_inverse(xi: &HurwitzInt, p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    inv_mod(xi.norm() % p, p)
        .ok_or_else(|| crate::Error::Domain(format!("p = {p} divides N({xi}) = {}", xi.norm())))
}

/// `α = 2 − Tr(ξ)²·N(ξ)⁻¹` in 𝔽_p, the middle coefficient of [`f_poly`].
pub fn alpha(xi: &HurwitzInt, p: u64) -> Result<u64> {
    let q_inv = norm_inverse(xi, p)?;
    let tr = reduce(xi.trace() as i128, p);
    let t2q = mul_mod(mul_mod(tr, tr, p), q_inv, p);
    Ok((2 + p - t2q) % p)
}

/// `f_{ξ,p}(x) = x² + αx + 1` over 𝔽_p.
pub fn f_poly(xi: &HurwitzInt, p: u64) -> Result<FpPoly> {
    Ok(FpPoly::new(p, vec![1, alpha(xi, p)?, 1]))
}

/// Matrix of `v ↦ ξ⁻¹ v ξ` on pure quaternions `v = xi + yj + zk`, acting on
/// column vectors `(x, y, z)`.
pub fn phi_matrix(xi: &HurwitzInt, p: u64) -> Result<Matrix3> {
    let q_inv = norm_inverse(xi, p)?;
    let [a, b, c, d] = xi.reduce_mod(p);
    let m = |x: u64, y: u64| mul_mod(x, y, p);
    let sum = |terms: &[(u64, bool)]| {
        terms.iter().fold(0u64, |acc, &(v, neg)| {
            if neg {
                (acc + p - v) % p
            } else {
                (acc + v) % p
            }
        })
    };
    let (aa, bb, cc, dd) = (m(a, a), m(b, b), m(c, c), m(d, d));
    let two = |x: u64| (2 * x) % p;
    let (ab, ac, ad) = (two(m(a, b)), two(m(a, c)), two(m(a, d)));
    let (bc, bd, cd) = (two(m(b, c)), two(m(b, d)), two(m(c, d)));
    let rows = [
        [
            sum(&[(aa, false), (bb, false), (cc, true), (dd, true)]),
            sum(&[(ad, false), (bc, false)]),
            sum(&[(ac, true), (bd, false)]),
        ],
        [
            sum(&[(ad, true), (bc, false)]),
            sum(&[(aa, false), (bb, true), (cc, false), (dd, true)]),
            sum(&[(ab, false), (cd, false)]),
        ],
        [
            sum(&[(ac, false), (bd, false)]),
            sum(&[(ab, true), (cd, false)]),
            sum(&[(aa, false), (bb, true), (cc, true), (dd, false)]),
        ],
    ];
    Ok(Matrix3::from_rows(p, rows).scale(q_inv))
}

/// True when `p ∤ N(ξ)`, so that [`f_poly`] and [`phi_matrix`] are defined.
pub fn norm_invertible(xi: &HurwitzInt, p: u64) -> bool {
    xi.norm() % p != 0
}

/// Rejects an `f_poly`/`phi_matrix` request whose inputs are malformed.
pub fn check_prime_pair(xi: &HurwitzInt, p: u64) -> Result<()> {
    check_odd_prime(p)?;
    let q = xi.norm();
    if !crate::arith::is_prime(q) {
        return domain(format!("N({xi}) = {q} is not prime"));
    }
    if q == p {
        return domain(format!("N({xi}) = p = {p}; metacommutation needs distinct primes"));
    }
    Ok(())
}
