//! Exact counts of factorizations of a positive integer.
//!
//! For `m`, `k` and a lower bound `ell` on the factors:
//!
//! - `nu_ell(m, k)`: ordered `k`-tuples `(m_1, ..., m_k)` with every `m_i >= ell`
//!   and product `m`;
//! - `mu_ell(m, k)`: nondecreasing tuples `ell <= m_1 <= ... <= m_k`, i.e.
//!   multiplicative partitions of `m` into `k` parts;
//! - totals over all `k` (for `ell >= 2`), and pattern counts refined by the
//!   multiplicities of repeated factors.
//!
//! [`closed`] evaluates the explicit formulas for `k <= 4`, [`recursive`] the
//! divisor recursions for any `k`, and [`oracle`] enumerates factorizations
//! by brute force to check both. [`table`] tabulates any of these over a
//! range with a smallest-prime-factor sieve.

pub mod arith;
pub mod closed;
pub mod error;
pub mod oracle;
pub mod recursive;
pub mod table;

pub use arith::{
    binomial, divisors, divisors_of, epsilon, factorize, floor_div, integer_nth_root, tau,
    ExactCount, PrimeSignature,
};
pub use closed::{
    k3_numerator, k4_numerator, mu_closed, mu_pattern, nu1, nu2, sum_eps_over_divisors,
    sum_tau_over_divisors, MultiplicityPattern,
};
pub use error::{Error, Result};
pub use oracle::{Oracle, OracleLimits};
pub use recursive::{
    additive_partition, mu_one_from_two, mu_rec, mu_total, mu_via_shift, nu_rec, nu_total,
    CountQuery, Counter, MemoStore,
};
pub use table::{
    build_spf, compare_reference, generate_table, generate_table_parallel, parse_bfile,
    ComparisonReport, Method, Quantity, SpfTable, TableRow,
};
