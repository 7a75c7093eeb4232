//! The metacommutation map `τ_{ξ,p}` on `Π_p`, computed either by
//! refactoring `πξ = ξ′π′` directly or by letting the matrix of
//! `v ↦ ξ⁻¹vξ` act on the conic points.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{check_odd_prime, is_prime};
use crate::classes::{Conic, ConicPoint, PrimeClasses};
use crate::error::{domain, invariant, Error, Result};
use crate::fp::{check_prime_pair, phi_matrix, Matrix3};
use crate::hurwitz::HurwitzInt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Direct,
    Conic,
}

/// A permutation of the `p + 1` classes, as an image array:
/// `image[i]` is the index of `τ(class i)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Permutation {
    pub p: u64,
    pub image: Vec<usize>,
    pub engine: Engine,
}

impl Permutation {
    pub fn new(p: u64, image: Vec<usize>, engine: Engine) -> Result<Self> {
        if image.len() as u64 != p + 1 {
            return domain(format!("permutation of {} points for p = {p}", image.len()));
        }
        let mut hit = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut hit[i], true) {
                return invariant(format!("image {image:?} is not a bijection"));
            }
        }
        Ok(Self { p, image, engine })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &i)| k == i)
    }

    /// Same underlying map, regardless of which engine produced it.
    pub fn same_map(&self, other: &Self) -> bool {
        self.p == other.p && self.image == other.image
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.image[k] == k).collect()
    }

    /// Disjoint cycles (including fixed points), each starting at its
    /// smallest index, ordered by that index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cycle.push(k);
                k = self.image[k];
            }
            out.push(cycle);
        }
        out
    }
}

/// Swaps the prime factors of `πξ`: returns `(ξ′, π′)` with `πξ = ξ′π′`,
/// `N(ξ′) = N(ξ)`, `N(π′) = N(π)` and `π′` the canonical left associate.
pub fn metacommute(pi: &HurwitzInt, xi: &HurwitzInt) -> Result<(HurwitzInt, HurwitzInt)> {
    let p = pi.norm();
    let q = xi.norm();
    check_odd_prime(p).map_err(|_| Error::Domain(format!("N({pi}) = {p} is not an odd prime")))?;
    if !is_prime(q) {
        return domain(format!("N({xi}) = {q} is not prime"));
    }
    if p == q {
        return domain(format!("N({pi}) = N({xi}) = {p}; the norms must differ"));
    }
    let gamma = pi.checked_mul(xi)?;
    if gamma.div_int(p as i64).is_some() {
        return invariant(format!("{p} divides {pi}·{xi}"));
    }
    let g = HurwitzInt::gcrd(&gamma, &HurwitzInt::new(p as i64, 0, 0, 0))?;
    if g.norm() != p {
        return invariant(format!("gcrd({gamma}, {p}) has norm {}", g.norm()));
    }
    let pi2 = g.canonical_left_associate();
    let xi2 = gamma
        .right_quotient(&pi2)
        .ok_or_else(|| Error::Invariant(format!("{pi2} does not right-divide {gamma}")))?;
    if xi2.norm() != q {
        return invariant(format!("N({xi2}) = {} differs from {q}", xi2.norm()));
    }
    Ok((xi2, pi2))
}

/// `τ_{ξ,p}` by refactoring `πξ` for every class representative.
pub fn permutation_direct(xi: &HurwitzInt, classes: &PrimeClasses) -> Result<Permutation> {
    let p = classes.modulus();
    check_prime_pair(xi, p)?;
    let image = classes
        .classes()
        .par_iter()
        .map(|class| {
            let (_, pi2) = metacommute(&class.rep, xi)?;
            classes
                .class_of(&pi2)
                .ok_or_else(|| Error::Invariant(format!("{pi2} is not a class above {p}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(p, image, Engine::Direct)
}

/// Action of an arbitrary matrix on the conic points. Fails if a point is
/// sent off the conic or to zero.
pub fn permutation_from_matrix(m: &Matrix3, conic: &Conic) -> Result<Permutation> {
    let p = conic.modulus();
    let image = conic
        .points()
        .iter()
        .map(|pt| {
            let v = m.apply(pt.coords());
            ConicPoint::normalize(p, v)
                .and_then(|img| conic.index_of(&img))
                .ok_or_else(|| Error::Invariant(format!("{pt} is sent to {v:?}, off the conic")))
        })
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(p, image, Engine::Conic)
}

/// `τ_{ξ,p}` as the action of `φ_{ξ,p}` on the conic points.
pub fn permutation_conic(xi: &HurwitzInt, conic: &Conic) -> Result<Permutation> {
    let p = conic.modulus();
    check_prime_pair(xi, p)?;
    permutation_from_matrix(&phi_matrix(xi, p)?, conic)
}
