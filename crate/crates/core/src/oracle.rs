//! Brute-force enumeration of factorizations.
//!
//! This is the ground truth the formulas are tested against. It shares
//! nothing with the closed forms or the recursions apart from divisor
//! listing, and makes no attempt to be fast.

use num_bigint::BigUint;

use crate::arith::{divisors_of, integer_nth_root, ExactCount};
use crate::closed::MultiplicityPattern;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_M: u64 = 1_000_000;
pub const DEFAULT_MAX_K: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_m: u64,
    pub max_k: u32,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_m: DEFAULT_MAX_M,
            max_k: DEFAULT_MAX_K,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Oracle {
    limits: OracleLimits,
}

impl Oracle {
    pub fn new(limits: OracleLimits) -> Self {
        Oracle { limits }
    }

    pub fn limits(&self) -> OracleLimits {
        self.limits
    }

    fn check_m(&self, m: u64) -> Result<()> {
        if m == 0 {
            return Err(Error::Zero);
        }
        if m > self.limits.max_m {
            return Err(Error::OracleBudget(format!(
                "m = {m} exceeds {}",
                self.limits.max_m
            )));
        }
        Ok(())
    }

    fn check(&self, m: u64, k: u32, ell: u64) -> Result<()> {
        self.check_m(m)?;
        if k == 0 {
            return Err(Error::FactorCount(k, ">= 1"));
        }
        if k > self.limits.max_k {
            return Err(Error::OracleBudget(format!(
                "k = {k} exceeds {}",
                self.limits.max_k
            )));
        }
        if ell == 0 {
            return Err(Error::LowerBound(ell, ">= 1"));
        }
        Ok(())
    }

    /// Every `(m_1 <= ... <= m_k)` with `m_i >= ell` and product `m`, in
    /// lexicographic order.
    pub fn enum_nondecreasing(&self, m: u64, k: u32, ell: u64) -> Result<Vec<Vec<u64>>> {
        self.check(m, k, ell)?;
        Ok(nondecreasing(m, k, ell))
    }

    /// Ordered `k`-tuples of factors `>= ell` with product `m`, by direct
    /// recursive enumeration.
    pub fn count_ordered(&self, m: u64, k: u32, ell: u64) -> Result<ExactCount> {
        self.check(m, k, ell)?;
        let divs = divisors_of(m)?;
        Ok(BigUint::from(ordered(m, k, ell, &divs)))
    }

    /// Same count as [`Oracle::count_ordered`], obtained by weighting each
    /// nondecreasing tuple with the number of its distinct rearrangements.
    pub fn count_ordered_via_multinomial(&self, m: u64, k: u32, ell: u64) -> Result<ExactCount> {
        self.check(m, k, ell)?;
        let fact = |n: u64| (1..=n).product::<u64>();
        let total: u64 = nondecreasing(m, k, ell)
            .iter()
            .map(|t| {
                profile(t)
                    .iter()
                    .fold(fact(u64::from(k)), |acc, &b| acc / fact(u64::from(b)))
            })
            .sum();
        Ok(BigUint::from(total))
    }

    /// Factorizations into distinct bases `>= ell` whose multiplicities form
    /// `pattern`.
    pub fn count_by_pattern(
        &self,
        m: u64,
        pattern: &MultiplicityPattern,
        ell: u64,
    ) -> Result<ExactCount> {
        self.check(m, pattern.k(), ell)?;
        let count = nondecreasing(m, pattern.k(), ell)
            .iter()
            .filter(|t| profile(t) == pattern.parts())
            .count();
        Ok(BigUint::from(count))
    }

    /// Total over all `k` of the per-`k` count. Factors are at least 2, so
    /// `k <= log2 m`.
    pub fn count_all_k(&self, m: u64, ell: u64, ordered_tuples: bool) -> Result<ExactCount> {
        self.check_m(m)?;
        if m < 2 {
            return Err(Error::NotAboveOne(m.to_string()));
        }
        if ell < 2 {
            return Err(Error::LowerBound(ell, ">= 2"));
        }
        let divs = divisors_of(m)?;
        let max_k = m.ilog2();
        let total: u64 = (1..=max_k)
            .map(|k| {
                if ordered_tuples {
                    ordered(m, k, ell, &divs)
                } else {
                    nondecreasing(m, k, ell).len() as u64
                }
            })
            .sum();
        Ok(BigUint::from(total))
    }
}

fn nondecreasing(m: u64, k: u32, ell: u64) -> Vec<Vec<u64>> {
    fn go(m: u64, k: u32, lo: u64, divs: &[u64], prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == 1 {
            if m >= lo {
                prefix.push(m);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let hi = integer_nth_root(m, k);
        for &d in divs {
            if d > hi {
                break;
            }
            if d >= lo && m.is_multiple_of(d) {
                prefix.push(d);
                go(m / d, k - 1, d, divs, prefix, out);
                prefix.pop();
            }
        }
    }
    let divs = divisors_of(m).expect("m >= 1");
    let mut out = Vec::new();
    go(m, k, ell, &divs, &mut Vec::new(), &mut out);
    out
}

fn ordered(m: u64, k: u32, ell: u64, divs: &[u64]) -> u64 {
    if k == 1 {
        return u64::from(m >= ell);
    }
    divs.iter()
        .filter(|&&d| d >= ell && m.is_multiple_of(d))
        .map(|&d| ordered(m / d, k - 1, ell, divs))
        .sum()
}

/// Sorted multiplicities of the distinct values in a sorted tuple.
fn profile(tuple: &[u64]) -> Vec<u32> {
    let mut runs: Vec<u32> = Vec::new();
    for (idx, v) in tuple.iter().enumerate() {
        if idx > 0 && tuple[idx - 1] == *v {
            *runs.last_mut().unwrap() += 1;
        } else {
            runs.push(1);
        }
    }
    runs.sort_unstable();
    runs
}
