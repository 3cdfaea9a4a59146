// SPDX-License-Identifier: Apache-2.0

//! Prime fields, primitive roots and cyclotomic classes.
//!
//! For a prime `p` with primitive root `alpha` and `e | p - 1`, the cyclotomic
//! class of index `e` and position `i` is `{ alpha^(i + e*j) : 0 <= j < (p-1)/e }`,
//! the coset `alpha^i * <alpha^e>` of the index-`e` subgroup of `F_p^*`.

use serde::Serialize;

use crate::error::{EdfError, Result};
use crate::family::Family;
use crate::group::{GroupElement, GroupSpec};

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// True for `p^m` with `p` prime and `m >= 1`.
pub fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let p = smallest_prime_factor(n);
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    rest == 1
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return f;
        }
        f += 2;
    }
    n
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 1 {
        let p = smallest_prime_factor(n);
        out.push(p);
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    out
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(EdfError::NotPrime {
            value: p,
            prime_power: p != 2 && is_prime_power(p),
        });
    }
    Ok(())
}

/// Smallest positive primitive root modulo an odd prime.
pub fn primitive_root(p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    let factors = distinct_prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .ok_or(EdfError::Inconsistent(format!("no primitive root mod {p}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeField {
    p: u64,
    alpha: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        Ok(Self {
            p,
            alpha: primitive_root(p)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn pow_alpha(&self, exp: u64) -> u64 {
        pow_mod(self.alpha, exp, self.p)
    }

    pub fn neg(&self, x: u64) -> u64 {
        (self.p - x % self.p) % self.p
    }

    pub fn class(&self, e: u64, i: u64) -> Result<CyclotomicClass> {
        if e == 0 || !(self.p - 1).is_multiple_of(e) || i >= e {
            return Err(EdfError::InvalidCyclotomy { p: self.p, e });
        }
        let len = (self.p - 1) / e;
        Ok(CyclotomicClass {
            p: self.p,
            alpha: self.alpha,
            e,
            index: i,
            elements: (0..len).map(|j| self.pow_alpha(i + e * j)).collect(),
        })
    }

    /// All `e` classes of index `e`, in order of position.
    pub fn classes(&self, e: u64) -> Result<Vec<CyclotomicClass>> {
        (0..e).map(|i| self.class(e, i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicClass {
    pub p: u64,
    pub alpha: u64,
    pub e: u64,
    pub index: u64,
    /// `alpha^(index + e*j)` for `j = 0, 1, ...`, in that order.
    pub elements: Vec<u64>,
}

impl CyclotomicClass {
    pub fn contains(&self, x: u64) -> bool {
        self.elements.contains(&x)
    }

    pub fn negated(&self) -> Vec<u64> {
        self.elements
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect()
    }
}

pub fn cyclotomic_class(p: u64, e: u64, i: u64) -> Result<CyclotomicClass> {
    PrimeField::new(p)?.class(e, i)
}

/// The family `{{0}, QR, QNR}` over `Z_p`. Whether it is a partitioned
/// difference family is left to the verifier.
pub fn qr_pdf(p: u64) -> Result<Family> {
    let field = PrimeField::new(p)?;
    let group = GroupSpec::cyclic(p)?;
    let to_block = |class: CyclotomicClass| -> Vec<GroupElement> {
        class.elements.into_iter().map(GroupElement::from).collect()
    };
    let blocks = vec![
        vec![GroupElement::from(0)],
        to_block(field.class(2, 0)?),
        to_block(field.class(2, 1)?),
    ];
    Family::new(group, blocks)
}
