use num_bigint::BigUint;
use serde::Serialize;
use serde_json::value::RawValue;

use pathmonoid_core::census::{count_report, enumerate, MaskRow};
use pathmonoid_core::factorize::{factor_iend, factor_paut};
use pathmonoid_core::genwords::{alphabet_iend, alphabet_paut, Expander, GeneratorSymbol, Word};
use pathmonoid_core::greens::{classify as classify_by_rule, oracle_relation, Relation};
use pathmonoid_core::rankcheck::{verify_rank as run_rank_checks, RankOptions};
use pathmonoid_core::{is_iend, is_paut, Error, Family, PartialInjection};

use crate::{AlphabetArg, CliError, CountFamily, FamilyArg, Global, Output};

pub fn require_n(g: &Global) -> Result<u32, CliError> {
    g.n.ok_or_else(|| CliError::usage("this command needs --n"))
}

/// Refuses `n` above a configured ceiling.
pub fn within(n: u32, limit: u32, what: &'static str) -> Result<(), CliError> {
    if n > limit {
        return Err(Error::ResourceBound {
            what,
            requested: n as u128,
            limit: limit as u128,
        }
        .into());
    }
    Ok(())
}

pub fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes")
}

/// Exact integers go out as bare JSON numbers whatever their size.
fn number(v: &BigUint) -> Box<RawValue> {
    RawValue::from_string(v.to_string()).expect("decimal digits are valid JSON")
}

#[derive(Serialize)]
struct MaskOut {
    mask: String,
    r: u32,
    s: u32,
    #[serde(rename = "T")]
    long_runs: u32,
    q1: Box<RawValue>,
    q2: Box<RawValue>,
    t1: Box<RawValue>,
    t2: Box<RawValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    paut: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iend: Option<Box<RawValue>>,
}

impl From<&MaskRow> for MaskOut {
    fn from(row: &MaskRow) -> Self {
        let p = &row.profile;
        MaskOut {
            mask: row.mask.clone(),
            r: p.runs,
            s: p.size,
            long_runs: p.long_runs,
            q1: number(&p.q_paut),
            q2: number(&p.q_iend),
            t1: number(&p.t_paut),
            t2: number(&p.t_iend),
            paut: row.paut.as_ref().map(number),
            iend: row.iend.as_ref().map(number),
        }
    }
}

#[derive(Serialize)]
struct CountOut {
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    paut_count: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iend_count: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_mask: Option<Vec<MaskOut>>,
}

pub fn count(g: &Global, family: CountFamily, per_mask: bool) -> Result<Output, CliError> {
    let n = require_n(g)?;
    let families: &[Family] = match family {
        CountFamily::Paut => &[Family::PAut],
        CountFamily::Iend => &[Family::IEnd],
        CountFamily::Both => &[Family::PAut, Family::IEnd],
    };
    let report = count_report(n, families, per_mask, g.n_max_enumerate)?;
    let out = CountOut {
        n,
        paut_count: report.paut_count.as_ref().map(number),
        iend_count: report.iend_count.as_ref().map(number),
        per_mask: report.per_mask.as_ref().map(|rows| rows.iter().map(MaskOut::from).collect()),
    };
    let mut text = Vec::new();
    if let Some(c) = &report.paut_count {
        text.push(format!("PAut({n}) = {c}"));
    }
    if let Some(c) = &report.iend_count {
        text.push(format!("IEnd({n}) = {c}"));
    }
    for row in report.per_mask.iter().flatten() {
        let p = &row.profile;
        let mut line = format!("{} r={} s={} T={}", row.mask, p.runs, p.size, p.long_runs);
        if let Some(c) = &row.paut {
            line += &format!(" paut={c}");
        }
        if let Some(c) = &row.iend {
            line += &format!(" iend={c}");
        }
        text.push(line);
    }
    Ok(Output {
        json: pretty(&out),
        text: text.join("\n"),
        csv: None,
        ok: true,
    })
}

#[derive(Serialize)]
struct EnumerateOut {
    n: u32,
    family: Family,
    count: usize,
    elements: Vec<String>,
}

pub fn enumerate_cmd(g: &Global, family: FamilyArg) -> Result<Output, CliError> {
    let n = require_n(g)?;
    let family = Family::from(family);
    let elements: Vec<String> = enumerate(n, family, g.n_max_enumerate)?
        .iter()
        .map(PartialInjection::to_string)
        .collect();
    let out = EnumerateOut {
        n,
        family,
        count: elements.len(),
        elements,
    };
    Ok(Output {
        json: pretty(&out),
        text: out.elements.join("\n"),
        csv: Some((vec!["element"], out.elements.iter().map(|e| vec![e.clone()]).collect())),
        ok: true,
    })
}

#[derive(Serialize)]
struct ClassifyOut {
    relation: Relation,
    family: Family,
    n: u32,
    method: &'static str,
    classes: Vec<Vec<String>>,
}

pub fn classify(g: &Global, family: FamilyArg, relation: &str, oracle: bool) -> Result<Output, CliError> {
    let n = require_n(g)?;
    let family = Family::from(family);
    let relation: Relation = relation.parse()?;
    within(n, g.n_max_closure, "classification vertex count")?;
    let monoid = enumerate(n, family, g.n_max_enumerate)?;
    let partition = if oracle {
        oracle_relation(&monoid, relation)?
    } else {
        classify_by_rule(&monoid, relation)?
    };
    let classes: Vec<Vec<String>> = partition
        .classes
        .iter()
        .map(|c| c.iter().map(PartialInjection::to_string).collect())
        .collect();
    let text = classes
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect::<Vec<_>>()
        .join("\n");
    let rows = classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |e| vec![i.to_string(), e.clone()]))
        .collect();
    let out = ClassifyOut {
        relation,
        family,
        n,
        method: if oracle { "ideals" } else { "characterization" },
        classes,
    };
    Ok(Output {
        json: pretty(&out),
        text,
        csv: Some((vec!["class", "element"], rows)),
        ok: true,
    })
}

#[derive(Serialize)]
struct WordOut {
    element: String,
    family: Family,
    alphabet: &'static str,
    word: String,
    length: usize,
    verified: bool,
}

pub fn factor(g: &Global, element: &str, alphabet: AlphabetArg) -> Result<Output, CliError> {
    let a: PartialInjection = element.parse()?;
    if let Some(n) = g.n {
        if n != a.n() {
            return Err(Error::SizeMismatch { left: n, right: a.n() }.into());
        }
    }
    let family = if is_paut(&a) {
        Family::PAut
    } else if is_iend(&a) {
        Family::IEnd
    } else {
        return Err(Error::NotInIEnd(a.to_string()).into());
    };
    let derived = match family {
        Family::PAut => factor_paut(&a)?,
        Family::IEnd => factor_iend(&a)?,
    };
    let (word, name, letters_ok) = match alphabet {
        AlphabetArg::Derived => (derived, "derived", true),
        AlphabetArg::Base => {
            let base = Expander::new(a.n())?.expand_word(&derived)?;
            let allowed = match family {
                Family::PAut => alphabet_paut(a.n())?,
                Family::IEnd => alphabet_iend(a.n())?,
            };
            let ok = base.letters().iter().all(|&s| allowed.contains(s));
            (base, "base", ok)
        }
    };
    let verified = letters_ok && word.eval() == a;
    let out = WordOut {
        element: a.to_string(),
        family,
        alphabet: name,
        word: word.to_string(),
        length: word.len(),
        verified,
    };
    Ok(Output {
        json: pretty(&out),
        text: out.word.clone(),
        csv: None,
        ok: verified,
    })
}

#[derive(Serialize)]
struct ExpandOut {
    n: u32,
    input: String,
    word: String,
    length: usize,
    verified: bool,
}

pub fn expand(g: &Global, symbol: Option<&str>, word: Option<&str>) -> Result<Output, CliError> {
    let n = require_n(g)?;
    let input = match (symbol, word) {
        (Some(s), _) => {
            let sym: GeneratorSymbol = s.parse()?;
            Word::new(n, vec![sym])?
        }
        (None, Some(w)) => Word::parse(n, w)?,
        (None, None) => return Err(CliError::usage("give --symbol or --word")),
    };
    let expanded = Expander::new(n)?.expand_word(&input)?;
    let verified = expanded.eval() == input.eval();
    let out = ExpandOut {
        n,
        input: input.to_string(),
        word: expanded.to_string(),
        length: expanded.len(),
        verified,
    };
    Ok(Output {
        json: pretty(&out),
        text: out.word.clone(),
        csv: None,
        ok: verified,
    })
}

pub fn verify_rank(g: &Global, family: FamilyArg, exhaustive: bool, formula_only: bool) -> Result<Output, CliError> {
    let n = require_n(g)?;
    if !formula_only {
        within(n, g.n_max_closure, "closure vertex count")?;
    }
    let opts = RankOptions {
        closure: !formula_only,
        exhaustive,
        enumeration_limit: g.n_max_closure,
        subset_budget: g.subset_budget as u128,
    };
    let witness = run_rank_checks(family.into(), n, opts)?;
    let ok = witness.consistent();
    let show = |v: Option<bool>| v.map_or("skipped".to_string(), |b| b.to_string());
    let mut text = vec![
        format!("{}({n}): formula rank {}", witness.family, witness.formula_value),
        format!("generating set size {}", witness.generating_set_size),
        format!("generates {}", show(witness.generates)),
        format!("irredundant {}", show(witness.irredundant)),
    ];
    if let Some(e) = &witness.exhaustive_lower_bound {
        text.push(format!(
            "no {}-subset generates: {}",
            e.subset_size, e.no_subset_generates
        ));
    }
    if let Some(l) = &witness.lemmas {
        text.push(format!("lower-bound witnesses hold: {}", l.all_hold()));
    }
    text.push(format!("consistent {ok}"));
    Ok(Output {
        json: pretty(&witness),
        text: text.join("\n"),
        csv: None,
        ok,
    })
}
