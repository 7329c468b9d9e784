//! Sieve-backed batch tables over `m = 2..=N`, their text formats, and
//! comparison against reference sequences in b-file form.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::arith::{ExactCount, PrimeSignature};
use crate::closed::{mu_closed, nu1, nu2};
use crate::error::{Error, Result};
use crate::recursive::Counter;

/// Largest sieve built unless the caller raises the budget (about 800 MB of
/// `u32` entries).
pub const DEFAULT_SIEVE_BUDGET: u64 = 200_000_000;

/// Smallest prime factor of every integer up to a limit.
#[derive(Clone, Debug)]
pub struct SpfTable {
    spf: Vec<u32>,
}

pub fn build_spf(limit: u64) -> Result<SpfTable> {
    build_spf_with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

/// Linear sieve: each composite is written exactly once, by its least prime.
pub fn build_spf_with_budget(limit: u64, budget: u64) -> Result<SpfTable> {
    let budget = budget.min(u64::from(u32::MAX));
    if limit > budget {
        return Err(Error::SieveBudget {
            requested: limit,
            budget,
        });
    }
    let limit = limit.max(1) as usize;
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let least = spf[i];
        for &p in &primes {
            let composite = i * p as usize;
            if p > least || composite > limit {
                break;
            }
            spf[composite] = p;
        }
    }
    Ok(SpfTable { spf })
}

impl SpfTable {
    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Smallest prime factor of `m`, for `2 <= m <= limit`.
    pub fn get(&self, m: u64) -> Option<u64> {
        if m < 2 || m > self.limit() {
            return None;
        }
        Some(u64::from(self.spf[m as usize]))
    }

    /// Same result as [`crate::arith::factorize`], by repeated division.
    pub fn factorize(&self, m: u64) -> Result<PrimeSignature> {
        if m == 1 {
            return Ok(PrimeSignature::one());
        }
        if m == 0 || m > self.limit() {
            return Err(Error::OutsideSieve {
                m,
                limit: self.limit(),
            });
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rest = m as usize;
        while rest > 1 {
            let p = self.spf[rest];
            rest /= p as usize;
            match factors.last_mut() {
                Some((q, e)) if *q == u64::from(p) => *e += 1,
                _ => factors.push((u64::from(p), 1)),
            }
        }
        Ok(PrimeSignature::from_factors_unchecked(factors))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Closed,
    Recursive,
}

/// The counting function tabulated by [`generate_table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// `mu_ell(m, k)`.
    Mu { k: u32, ell: u64, method: Method },
    /// `nu_ell(m, k)`: closed forms for `ell <= 2`, recursion otherwise.
    Nu { k: u32, ell: u64 },
    /// `mu_ell(m)` summed over all `k`.
    MuTotal { ell: u64 },
    /// `nu_ell(m)` summed over all `k`.
    NuTotal { ell: u64 },
}

impl Quantity {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Quantity::Mu { k, ell, method } => {
                if k == 0 {
                    return Err(Error::FactorCount(k, ">= 1"));
                }
                if ell == 0 {
                    return Err(Error::LowerBound(ell, ">= 1"));
                }
                if method == Method::Closed {
                    if k > 4 {
                        return Err(Error::FactorCount(k, "1..=4"));
                    }
                    if ell > 2 {
                        return Err(Error::LowerBound(ell, "{1, 2}"));
                    }
                }
            }
            Quantity::Nu { k, ell } => {
                if k == 0 {
                    return Err(Error::FactorCount(k, ">= 1"));
                }
                if ell == 0 {
                    return Err(Error::LowerBound(ell, ">= 1"));
                }
            }
            Quantity::MuTotal { ell } | Quantity::NuTotal { ell } => {
                if ell < 2 {
                    return Err(Error::LowerBound(ell, ">= 2"));
                }
            }
        }
        Ok(())
    }

    /// Totals start at `m = 1` with the empty factorization; per-`k` tables
    /// start at `m = 2`.
    pub fn first_index(&self) -> u64 {
        match self {
            Quantity::MuTotal { .. } | Quantity::NuTotal { .. } => 1,
            _ => 2,
        }
    }

    fn eval(&self, sig: &PrimeSignature, counter: &mut Counter) -> Result<ExactCount> {
        if sig.is_one() {
            return Ok(BigUint::one());
        }
        match *self {
            Quantity::Mu {
                k,
                ell,
                method: Method::Closed,
            } => mu_closed(sig, k, ell),
            Quantity::Mu {
                k,
                ell,
                method: Method::Recursive,
            } => counter.mu_for(sig, k, ell),
            Quantity::Nu { k, ell: 1 } => nu1(sig, k),
            Quantity::Nu { k, ell: 2 } => nu2(sig, k),
            Quantity::Nu { k, ell } => counter.nu_for(sig, k, ell),
            Quantity::MuTotal { ell } => counter.mu_total_for(sig, ell),
            Quantity::NuTotal { ell } => counter.nu_total_for(sig, ell),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub m: u64,
    pub value: ExactCount,
}

/// Streaming row iterator; memory use is the sieve plus one row.
pub struct TableRows<'a> {
    quantity: Quantity,
    spf: &'a SpfTable,
    indices: RangeInclusive<u64>,
    counter: Counter,
}

impl Iterator for TableRows<'_> {
    type Item = Result<TableRow>;

    fn next(&mut self) -> Option<Self::Item> {
        let m = self.indices.next()?;
        Some(row(self.quantity, self.spf, m, &mut self.counter))
    }
}

fn row(quantity: Quantity, spf: &SpfTable, m: u64, counter: &mut Counter) -> Result<TableRow> {
    let sig = spf.factorize(m)?;
    let value = quantity.eval(&sig, counter)?;
    // recursion caches are per row so memory stays flat across the range
    counter.clear();
    Ok(TableRow { m, value })
}

fn table_range(max: u64, quantity: Quantity, spf: &SpfTable) -> Result<RangeInclusive<u64>> {
    quantity.validate()?;
    if max < 2 {
        return Err(Error::NotAboveOne(max.to_string()));
    }
    if max > spf.limit() {
        return Err(Error::OutsideSieve {
            m: max,
            limit: spf.limit(),
        });
    }
    Ok(quantity.first_index()..=max)
}

/// Rows of `quantity` for every index up to `max`, in increasing order.
pub fn generate_table(max: u64, quantity: Quantity, spf: &SpfTable) -> Result<TableRows<'_>> {
    let indices = table_range(max, quantity, spf)?;
    Ok(TableRows {
        quantity,
        spf,
        indices,
        counter: Counter::new(),
    })
}

const CHUNK: u64 = 4096;

/// Same rows as [`generate_table`], computed on `threads` workers over
/// disjoint chunks and reassembled in index order.
pub fn generate_table_parallel(
    max: u64,
    quantity: Quantity,
    spf: &SpfTable,
    threads: usize,
) -> Result<Vec<TableRow>> {
    let indices = table_range(max, quantity, spf)?;
    let (start, end) = (*indices.start(), *indices.end());
    let chunks: Vec<(u64, u64)> = (start..=end)
        .step_by(CHUNK as usize)
        .map(|lo| (lo, (lo + CHUNK - 1).min(end)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    let parts: Vec<Result<Vec<TableRow>>> = pool.install(|| {
        chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut counter = Counter::new();
                (lo..=hi)
                    .map(|m| row(quantity, spf, m, &mut counter))
                    .collect()
            })
            .collect()
    });
    let mut rows = Vec::with_capacity((end - start + 1) as usize);
    for part in parts {
        rows.extend(part?);
    }
    Ok(rows)
}

/// `index value` lines.
pub fn write_bfile<W: Write>(out: &mut W, row: &TableRow) -> std::io::Result<()> {
    writeln!(out, "{} {}", row.m, row.value)
}

pub const CSV_HEADER: &str = "m,value";

pub fn write_csv_row<W: Write>(out: &mut W, row: &TableRow) -> std::io::Result<()> {
    writeln!(out, "{},{}", row.m, row.value)
}

/// Parses a b-file: `index value` per line, `#` comments and blank lines
/// ignored, indices strictly increasing.
pub fn parse_bfile<R: BufRead>(reader: R) -> Result<Vec<TableRow>> {
    let mut rows: Vec<TableRow> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim_end_matches('\r').trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: lineno,
            message,
        };
        let mut fields = text.split_whitespace();
        let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(format!("expected \"index value\", got {text:?}")));
        };
        let m: u64 = index
            .parse()
            .map_err(|_| parse_err(format!("bad index {index:?}")))?;
        let value: BigUint = value
            .parse()
            .map_err(|_| parse_err(format!("bad value {value:?}")))?;
        if let Some(prev) = rows.last() {
            if m <= prev.m {
                return Err(parse_err(format!("index {m} does not increase past {}", prev.m)));
            }
        }
        rows.push(TableRow { m, value });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub m: u64,
    pub computed: ExactCount,
    pub reference: ExactCount,
}

/// Result of comparing computed rows with a reference sequence over the
/// indices both contain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComparisonReport {
    pub compared: Option<(u64, u64)>,
    pub matches: usize,
    pub mismatches: Vec<Mismatch>,
    pub computed_only: usize,
    pub reference_only: usize,
}

impl ComparisonReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.compared {
            Some((lo, hi)) => writeln!(f, "compared indices {lo}..={hi}")?,
            None => writeln!(f, "no overlapping indices")?,
        }
        writeln!(f, "matches: {}", self.matches)?;
        writeln!(f, "mismatches: {}", self.mismatches.len())?;
        if self.computed_only > 0 || self.reference_only > 0 {
            writeln!(
                f,
                "outside overlap: {} computed-only, {} reference-only",
                self.computed_only, self.reference_only
            )?;
        }
        for mm in &self.mismatches {
            writeln!(f, "  m={} computed={} reference={}", mm.m, mm.computed, mm.reference)?;
        }
        Ok(())
    }
}

/// Merge-walks two increasing row streams.
pub fn compare_reference<I>(rows: I, reference: &[TableRow]) -> Result<ComparisonReport>
where
    I: IntoIterator<Item = Result<TableRow>>,
{
    let mut report = ComparisonReport::default();
    let mut refs = reference.iter().peekable();
    for row in rows {
        let row = row?;
        while refs.next_if(|r| r.m < row.m).is_some() {
            report.reference_only += 1;
        }
        match refs.next_if(|r| r.m == row.m) {
            Some(r) => {
                report.compared = Some(match report.compared {
                    Some((lo, _)) => (lo, row.m),
                    None => (row.m, row.m),
                });
                if r.value == row.value {
                    report.matches += 1;
                } else {
                    report.mismatches.push(Mismatch {
                        m: row.m,
                        computed: row.value,
                        reference: r.value.clone(),
                    });
                }
            }
            None => report.computed_only += 1,
        }
    }
    report.reference_only += refs.count();
    Ok(report)
}
