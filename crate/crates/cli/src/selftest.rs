//! Quick cross-checks of every subsystem against its brute-force oracle.

use std::collections::HashSet;

use serde::Serialize;

use pathmonoid_core::census::{count_iend, count_paut, enumerate};
use pathmonoid_core::factorize::{factor_iend, factor_paut};
use pathmonoid_core::genwords::{alphabet_iend, alphabet_paut, all_symbols, make_generator, rewrite_rule, Expander};
use pathmonoid_core::greens::{classify, oracle_relation, Relation};
use pathmonoid_core::path_core::{all_partial_injections, preserves_path_edges};
use pathmonoid_core::rankcheck::{closure, verify_rank, RankOptions};
use pathmonoid_core::{is_iend, is_paut, Error, Family};

use crate::commands::{pretty, within};
use crate::{CliError, Global, Output};

const FAMILIES: [Family; 2] = [Family::PAut, Family::IEnd];

/// Membership is checked against every partial injection, so it stops here.
const MEMBERSHIP_MAX_N: u32 = 7;

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct Report {
    n: u32,
    passed: bool,
    checks: Vec<Check>,
}

type Outcome = Result<String, String>;

fn fail(e: Error) -> String {
    e.to_string()
}

fn alphabet(family: Family, n: u32) -> Result<pathmonoid_core::genwords::Alphabet, Error> {
    match family {
        Family::PAut => alphabet_paut(n),
        Family::IEnd => alphabet_iend(n),
    }
}

fn counting(n: u32, limit: u32) -> Outcome {
    for k in 1..=n {
        for family in FAMILIES {
            let formula = match family {
                Family::PAut => count_paut(k),
                Family::IEnd => count_iend(k),
            }
            .map_err(fail)?;
            let listed = enumerate(k, family, limit).map_err(fail)?.len();
            if formula != listed.into() {
                return Err(format!("{family}({k}): formula {formula}, listed {listed}"));
            }
        }
    }
    Ok(format!("n=1..{n}"))
}

fn membership(n: u32) -> Outcome {
    let top = n.min(MEMBERSHIP_MAX_N);
    let mut total = 0;
    for k in 1..=top {
        for a in all_partial_injections(k).map_err(fail)? {
            if is_iend(&a) != preserves_path_edges(&a) || is_paut(&a) != (is_iend(&a) && is_iend(&a.inverse())) {
                return Err(format!("disagreement on {a}"));
            }
            total += 1;
        }
    }
    Ok(format!("{total} partial injections"))
}

fn generation(n: u32, limit: u32) -> Outcome {
    for k in 3..=n {
        for family in FAMILIES {
            let gens = alphabet(family, k).map_err(fail)?.elements();
            let got: HashSet<_> = closure(&gens, k).map_err(fail)?.elements().iter().copied().collect();
            let want: HashSet<_> = enumerate(k, family, limit).map_err(fail)?.into_iter().collect();
            if got != want {
                return Err(format!("{family}({k}): closure has {} of {}", got.len(), want.len()));
            }
        }
    }
    Ok(format!("n=3..{n}"))
}

fn round_trip(n: u32, limit: u32) -> Outcome {
    let mut total = 0;
    for k in 3..=n {
        let expander = Expander::new(k).map_err(fail)?;
        for family in FAMILIES {
            let allowed = alphabet(family, k).map_err(fail)?;
            for a in enumerate(k, family, limit).map_err(fail)? {
                let word = match family {
                    Family::PAut => factor_paut(&a),
                    Family::IEnd => factor_iend(&a),
                }
                .map_err(|e| format!("{a}: {e}"))?;
                let base = expander.expand_word(&word).map_err(fail)?;
                if base.eval() != a || !base.letters().iter().all(|&s| allowed.contains(s)) {
                    return Err(format!("{a}: bad word {base}"));
                }
                total += 1;
            }
        }
    }
    Ok(format!("{total} elements"))
}

fn rewrites(n: u32) -> Outcome {
    let mut total = 0;
    for k in 3..=n {
        for sym in all_symbols(k) {
            let g = make_generator(sym, k).map_err(fail)?;
            if let Some(rhs) = rewrite_rule(sym, k).map_err(fail)? {
                if rhs.eval() != g {
                    return Err(format!("n={k}: {sym} differs from {rhs}"));
                }
                total += 1;
            }
        }
    }
    Ok(format!("{total} identities"))
}

fn greens(n: u32, limit: u32) -> Outcome {
    for k in 1..=n {
        for family in FAMILIES {
            let m = enumerate(k, family, limit).map_err(fail)?;
            for rel in Relation::ALL {
                let o = oracle_relation(&m, rel).map_err(fail)?;
                let c = classify(&m, rel).map_err(fail)?;
                if !o.same_partition(&c) {
                    return Err(format!("{family}({k}) {rel}: {} vs {} classes", o.len(), c.len()));
                }
            }
        }
    }
    Ok(format!("L, R, H, J for n=1..{n}"))
}

fn rank(n: u32, limit: u32, budget: u128) -> Outcome {
    for k in 2..=n {
        for family in FAMILIES {
            let opts = RankOptions {
                closure: true,
                exhaustive: false,
                enumeration_limit: limit,
                subset_budget: budget,
            };
            let w = verify_rank(family, k, opts).map_err(fail)?;
            if !w.consistent() {
                return Err(format!("{family}({k}) inconsistent"));
            }
        }
    }
    Ok(format!("n=2..{n}"))
}

pub fn run(g: &Global) -> Result<Output, CliError> {
    let n = g.n.unwrap_or(4);
    if n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    within(n, g.n_max_closure, "selftest vertex count")?;
    let limit = g.n_max_closure;
    let budget = g.subset_budget as u128;
    let runs: Vec<(&'static str, Outcome)> = vec![
        ("counting", counting(n, limit)),
        ("membership", membership(n)),
        ("generation", generation(n, limit)),
        ("factorization", round_trip(n, limit)),
        ("rewrite_identities", rewrites(n)),
        ("greens_relations", greens(n, limit)),
        ("rank", rank(n, limit, budget)),
    ];
    let checks: Vec<Check> = runs
        .into_iter()
        .map(|(name, outcome)| {
            let passed = outcome.is_ok();
            let detail = outcome.unwrap_or_else(|e| e);
            Check { name, passed, detail }
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    let text = checks
        .iter()
        .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
        .collect::<Vec<_>>()
        .join("\n");
    let report = Report { n, passed, checks };
    Ok(Output {
        json: pretty(&report),
        text,
        csv: None,
        ok: passed,
    })
}
