//! Exit criteria. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use mulpart::table::{generate_table, generate_table_parallel, write_bfile, Method, Quantity};
use mulpart::{
    additive_partition, build_spf, compare_reference, factorize, k3_numerator, k4_numerator,
    mu_closed, nu1, nu2, parse_bfile, ComparisonReport, CountQuery, Counter, Oracle,
    PrimeSignature, TableRow,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, budget_s: u64) -> Outcome {
    check(elapsed <= Duration::from_secs(budget_s), || {
        format!("took {:.2?}, budget {budget_s}s", elapsed)
    })
}

fn prime_power_ordered_total() -> Outcome {
    let start = Instant::now();
    let mut counter = Counter::new();
    let oracle = Oracle::default();
    for a in 1..=20u32 {
        let expected = BigUint::from(1u32) << (a - 1);
        let got = counter.nu_total(1u64 << a, 2).map_err(|e| e.to_string())?;
        check(got == expected, || format!("nu_total(2^{a}, 2) = {got}"))?;
        if a <= 12 {
            let brute = oracle.count_all_k(1u64 << a, 2, true).map_err(|e| e.to_string())?;
            check(brute == expected, || format!("oracle total for 2^{a} = {brute}"))?;
        }
    }
    within(start.elapsed(), 1)
}

fn closed_forms_match_oracle() -> Outcome {
    let start = Instant::now();
    let oracle = Oracle::default();
    for m in 2..=5000u64 {
        let sig = factorize(m).unwrap();
        for k in 1..=4 {
            for ell in 1..=2 {
                let closed = mu_closed(&sig, k, ell).map_err(|e| e.to_string())?;
                let brute = oracle.enum_nondecreasing(m, k, ell).unwrap().len();
                check(closed == BigUint::from(brute), || {
                    format!("mu_{ell}({m}, {k}): closed {closed}, oracle {brute}")
                })?;
            }
        }
    }
    within(start.elapsed(), 60)
}

fn nu_formulas_match_oracle() -> Outcome {
    let start = Instant::now();
    let oracle = Oracle::default();
    for m in 2..=2000u64 {
        let sig = factorize(m).unwrap();
        for k in 1..=5 {
            let (a, b) = (nu1(&sig, k).unwrap(), oracle.count_ordered(m, k, 1).unwrap());
            check(a == b, || format!("nu_1({m}, {k}): formula {a}, oracle {b}"))?;
            let (a, b) = (nu2(&sig, k).unwrap(), oracle.count_ordered(m, k, 2).unwrap());
            check(a == b, || format!("nu_2({m}, {k}): formula {a}, oracle {b}"))?;
        }
    }
    within(start.elapsed(), 60)
}

fn recursions_consistent() -> Outcome {
    let oracle = Oracle::default();
    let mut counter = Counter::new();
    for m in 2..=3000u64 {
        for k in 1..=6 {
            let mu1 = counter.mu_rec(CountQuery::new(m, k, 1).unwrap()).unwrap();
            let via_two = counter.mu_one_from_two(m, k).unwrap();
            check(mu1 == via_two, || format!("mu_1({m},{k}) = {mu1}, via mu_2 {via_two}"))?;
            for ell in 1..=4 {
                let q = CountQuery::new(m, k, ell).unwrap();
                let rec = counter.mu_rec(q).unwrap();
                let brute = oracle.enum_nondecreasing(m, k, ell).unwrap().len();
                check(rec == BigUint::from(brute), || {
                    format!("mu_{ell}({m},{k}): recursion {rec}, oracle {brute}")
                })?;
                let nu = counter.nu_rec(q).unwrap();
                let nu_brute = oracle.count_ordered(m, k, ell).unwrap();
                check(nu == nu_brute, || {
                    format!("nu_{ell}({m},{k}): recursion {nu}, oracle {nu_brute}")
                })?;
                if ell >= 2 {
                    let shifted = counter.mu_via_shift(q).unwrap();
                    check(shifted == rec, || {
                        format!("mu_{ell}({m},{k}): shift {shifted}, recursion {rec}")
                    })?;
                }
            }
        }
        counter.clear();
    }
    Ok(())
}

fn prime_power_bridge() -> Outcome {
    let mut counter = Counter::new();
    for p in [2u64, 3] {
        for n in 1..=25u32 {
            for k in 1..=n {
                let m = p.pow(n);
                let rec = counter.mu_rec(CountQuery::new(m, k, 2).unwrap()).unwrap();
                let part = additive_partition(u64::from(n), u64::from(k));
                check(rec == part, || format!("mu_2({p}^{n},{k}) = {rec}, P({n},{k}) = {part}"))?;
            }
        }
    }
    Ok(())
}

fn additive_corollaries() -> Outcome {
    for n in 1..=200u64 {
        let mut triples = 0u64;
        let mut quads = 0u64;
        for a in 0..=n {
            for b in a..=n - a {
                let rest = n - a - b;
                if rest >= b {
                    triples += 1;
                }
                for c in b..=rest {
                    if rest - c >= c {
                        quads += 1;
                    } else {
                        break;
                    }
                }
            }
        }
        let sig = PrimeSignature::prime_power(2, n as u32).unwrap();
        let k3 = mu_closed(&sig, 3, 1).map_err(|e| e.to_string())?;
        let k4 = mu_closed(&sig, 4, 1).map_err(|e| e.to_string())?;
        check(k3 == BigUint::from(triples), || format!("n={n}: triples {k3} vs {triples}"))?;
        check(k4 == BigUint::from(quads), || format!("n={n}: quadruples {k4} vs {quads}"))?;
    }
    Ok(())
}

fn reference(name: &str) -> Vec<TableRow> {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    parse_bfile(BufReader::new(File::open(&path).expect("reference file"))).expect("b-file")
}

fn sequence_audit() -> Outcome {
    let spf = build_spf(1000).unwrap();
    let audit = |q: Quantity, name: &str, min_matches: usize| -> Outcome {
        let refs = reference(name);
        let report: ComparisonReport =
            compare_reference(generate_table(1000, q, &spf).unwrap(), &refs)
                .map_err(|e| e.to_string())?;
        check(report.is_clean() && report.matches >= min_matches, || {
            format!("{name}: {report}")
        })
    };
    audit(Quantity::MuTotal { ell: 2 }, "b001055.txt", 1000)?;
    audit(
        Quantity::Mu { k: 3, ell: 1, method: Method::Closed },
        "b034836.txt",
        999,
    )
}

fn integrality() -> Outcome {
    let start = Instant::now();
    let spf = build_spf(100_000).unwrap();
    for m in 2..=100_000u64 {
        let sig = spf.factorize(m).unwrap();
        let (n3, n4) = (k3_numerator(&sig), k4_numerator(&sig));
        check(&n3 % 6 == 0.into(), || format!("k=3 numerator {n3} at m={m}"))?;
        check(&n4 % 24 == 0.into(), || format!("k=4 numerator {n4} at m={m}"))?;
    }
    within(start.elapsed(), 30)
}

fn bytes(rows: impl IntoIterator<Item = TableRow>) -> Vec<u8> {
    let mut out = Vec::new();
    for row in rows {
        write_bfile(&mut out, &row).unwrap();
    }
    out
}

fn million_row_table() -> Outcome {
    const N: u64 = 1_000_000;
    let q = Quantity::Mu { k: 4, ell: 1, method: Method::Closed };
    let spf = build_spf(N).unwrap();
    let start = Instant::now();
    let rows: Vec<TableRow> = generate_table(N, q, &spf)
        .unwrap()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, 60)?;
    let serial = bytes(rows);
    let parallel = bytes(generate_table_parallel(N, q, &spf, 4).map_err(|e| e.to_string())?);
    check(serial == parallel, || "parallel output differs".to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 prime-power ordered total is 2^(a-1)", prime_power_ordered_total),
        ("2 closed forms k<=4, ell<=2 match oracle on [2, 5000]", closed_forms_match_oracle),
        ("3 nu_1 / nu_2 match ordered oracle on [2, 2000], k<=5", nu_formulas_match_oracle),
        ("4 recursions match oracle on [2, 3000], k<=6, ell<=4", recursions_consistent),
        ("5 mu_2(p^n, k) = P(n, k) for p in {2,3}, n<=25", prime_power_bridge),
        ("6 additive corollaries for n in [1, 200]", additive_corollaries),
        ("7 reference sequence audit (A001055, A034836)", sequence_audit),
        ("8 k=3 / k=4 numerators divisible on [2, 1e5]", integrality),
        ("9 k=4 table to 1e6 under 60s, parallel byte-identical", million_row_table),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(()) => println!("PASS  criterion {name} ({:.2?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
