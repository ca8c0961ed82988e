//! Rows of the inert-prime and split-prime summary tables.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exec::Exec;
use crate::ffpoly::primes_between;
use crate::modcurve::genus;
use crate::ttv::{ddt, SplitClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertRow {
    pub p: u64,
    pub genus: u64,
    pub deg_d: usize,
    pub genus_minus_degree: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRow {
    pub p: u64,
    pub deg_d: usize,
    /// Distinct roots of d(t) over the algebraic closure.
    pub non_ordinary: usize,
    pub difference: i64,
}

/// Primes `7 <= p <= pmax` of the given class, ascending.
pub fn family_primes(class: SplitClass, pmax: u64) -> Vec<u64> {
    primes_between(7, pmax)
        .into_iter()
        .filter(|&p| SplitClass::of(p) == Some(class))
        .collect()
}

pub fn inert_row(p: u64, exec: Exec) -> Result<InertRow> {
    let g = genus(p)?.genus;
    let deg_d = ddt(p, exec)?.degree;
    Ok(InertRow {
        p,
        genus: g,
        deg_d,
        genus_minus_degree: g as i64 - deg_d as i64,
    })
}

pub fn split_row(p: u64, exec: Exec) -> Result<SplitRow> {
    let d = ddt(p, exec)?;
    Ok(SplitRow {
        p,
        deg_d: d.degree,
        non_ordinary: d.distinct_roots_closure,
        difference: d.degree as i64 - d.distinct_roots_closure as i64,
    })
}

/// Rows are computed one prime per task and returned sorted by p.
pub fn inert_table(pmax: u64, exec: Exec) -> Result<Vec<InertRow>> {
    let primes = family_primes(SplitClass::Inert, pmax);
    exec.map_slice(&primes, |&p| inert_row(p, Exec::Sequential))
        .into_iter()
        .collect()
}

pub fn split_table(pmax: u64, exec: Exec) -> Result<Vec<SplitRow>> {
    // Largest primes first so the slowest tasks start early.
    let mut primes = family_primes(SplitClass::Split, pmax);
    primes.reverse();
    let mut rows: Vec<SplitRow> = exec
        .map_slice(&primes, |&p| split_row(p, Exec::Sequential))
        .into_iter()
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| r.p);
    Ok(rows)
}
