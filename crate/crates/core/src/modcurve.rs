//! Genus of the triangular modular curve `X0_(5,inf,inf)(p)` and the
//! genus-degree relation `g = deg d(t) + delta` for split primes.
//!
//! For split `p`, write `p + 1 = 5n + m` with `m = 0` (`p = 4 mod 5`) or
//! `m = 2` (`p = 1 mod 5`); the genus is `2n - 1`.
//!
//! For inert `p` the closed form `2(p^2 + 1)/5 - p` is used. It is fitted to
//! published values rather than derived here, and the test suite pins it
//! against every tabulated inert prime up to 103.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ttv::{ddt, family_prime, SplitClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenusRecord {
    pub p: u64,
    pub split_class: SplitClass,
    /// Split only: `p + 1 = 5n + m`.
    pub n: Option<u64>,
    pub m: Option<u64>,
    /// Split only: `p = 5k + 1` or `p = 5k - 1`.
    pub k: Option<u64>,
    pub genus: u64,
    pub delta: Option<i64>,
}

pub fn genus(p: u64) -> Result<GenusRecord> {
    let (_, class) = family_prime(p)?;
    Ok(match class {
        SplitClass::Split => {
            let (m, k) = if p % 5 == 1 { (2, (p - 1) / 5) } else { (0, (p + 1) / 5) };
            let n = (p + 1 - m) / 5;
            GenusRecord {
                p,
                split_class: class,
                n: Some(n),
                m: Some(m),
                k: Some(k),
                genus: 2 * n - 1,
                delta: Some(delta(p)?),
            }
        }
        SplitClass::Inert => GenusRecord {
            p,
            split_class: class,
            n: None,
            m: None,
            k: None,
            genus: 2 * (p * p + 1) / 5 - p,
            delta: None,
        },
    })
}

/// `-1` for `p = 1 (mod 5)`, `+1` for `p = 4 (mod 5)`.
pub fn delta(p: u64) -> Result<i64> {
    match p % 5 {
        1 => Ok(-1),
        4 => Ok(1),
        _ => Err(Error::InertPrime(p)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenusRelation {
    pub p: u64,
    pub genus: u64,
    pub deg_d: usize,
    pub delta: i64,
    pub holds: bool,
}

/// Compare the genus formula with `deg d(t) + delta`, each side computed on
/// its own.
pub fn verify_genus_relation(p: u64, exec: Exec) -> Result<GenusRelation> {
    let (_, class) = family_prime(p)?;
    if class == SplitClass::Inert {
        return Err(Error::InertPrime(p));
    }
    let g = genus(p)?.genus;
    let delta = delta(p)?;
    let deg_d = ddt(p, exec)?.degree;
    Ok(GenusRelation {
        p,
        genus: g,
        deg_d,
        delta,
        holds: g as i64 == deg_d as i64 + delta,
    })
}
