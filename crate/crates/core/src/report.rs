//! Text and JSON renderings of reports. The JSON layouts are documented in
//! `docs/json-schema.md`; every key is always present (absent values are
//! `null`) and keys appear in a fixed order.

use serde::Serialize;

use crate::brackets::{catalan, PowerFamily};
use crate::elemset::ElemSet;
use crate::ideals::{IdealKind, IdealVerdict, Side};
use crate::laws::{Instance, LawId, LawReport, Verdict, Witness};
use crate::table::HyperTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn names_of(t: &HyperTable, s: ElemSet) -> Vec<String> {
    s.iter().map(|x| t.name(x).to_string()).collect()
}

/// `L*R = ... = value`, spelled out the way one would by hand:
/// `(b∘d)*{d} = {a,c}*{d} = (a∘d) ∪ (c∘d) = {a} ∪ {a,b} = {a,b}`.
pub fn product_chain(t: &HyperTable, left: (&str, ElemSet), right: (&str, ElemSet)) -> String {
    const MAX_TERMS: usize = 6;
    let (l_text, l) = left;
    let (r_text, r) = right;
    let value = t.product(l, r);
    let mut steps = vec![format!("{l_text}*{r_text}")];
    let sets = format!("{}*{}", t.fmt_set(l), t.fmt_set(r));
    if sets != steps[0] {
        steps.push(sets);
    }
    let pairs: Vec<(usize, usize)> = l.iter().flat_map(|u| r.iter().map(move |v| (u, v))).collect();
    if pairs.len() == 1 {
        let (u, v) = pairs[0];
        steps.push(format!("{}∘{}", t.name(u), t.name(v)));
    } else if pairs.len() <= MAX_TERMS {
        steps.push(pairs.iter().map(|&(u, v)| format!("({}∘{})", t.name(u), t.name(v))).collect::<Vec<_>>().join(" ∪ "));
        steps.push(pairs.iter().map(|&(u, v)| t.fmt_set(t.entry(u, v))).collect::<Vec<_>>().join(" ∪ "));
    }
    let last = t.fmt_set(value);
    if steps.last() != Some(&last) {
        steps.push(last);
    }
    steps.join(" = ")
}

fn hyper_text(t: &HyperTable, a: usize, b: usize) -> (String, ElemSet) {
    (format!("({}∘{})", t.name(a), t.name(b)), t.entry(a, b))
}

fn single(t: &HyperTable, a: usize) -> (String, ElemSet) {
    (format!("{{{}}}", t.name(a)), ElemSet::singleton(a))
}

/// The two evaluation chains of a witness, left side first.
pub fn witness_chains(t: &HyperTable, law: LawId, w: &Witness) -> (String, String) {
    let chain = |l: (String, ElemSet), r: (String, ElemSet)| product_chain(t, (&l.0, l.1), (&r.0, r.1));
    match &w.tuple {
        Instance::Elements(xs) => match law {
            LawId::LeftInvertive => {
                let (a, b, c) = (xs[0], xs[1], xs[2]);
                (chain(hyper_text(t, a, b), single(t, c)), chain(hyper_text(t, c, b), single(t, a)))
            }
            LawId::Associative => {
                let (a, b, c) = (xs[0], xs[1], xs[2]);
                (chain(hyper_text(t, a, b), single(t, c)), chain(single(t, a), hyper_text(t, b, c)))
            }
            LawId::LocallyAssociative => {
                let a = xs[0];
                (chain(hyper_text(t, a, a), single(t, a)), chain(single(t, a), hyper_text(t, a, a)))
            }
            LawId::Commutative => {
                let (a, b) = (xs[0], xs[1]);
                let side = |x: usize, y: usize| format!("{}∘{} = {}", t.name(x), t.name(y), t.fmt_set(t.entry(x, y)));
                (side(a, b), side(b, a))
            }
            LawId::Medial => {
                let (a, b, c, d) = (xs[0], xs[1], xs[2], xs[3]);
                (chain(hyper_text(t, a, b), hyper_text(t, c, d)), chain(hyper_text(t, a, c), hyper_text(t, b, d)))
            }
            LawId::SetLeftInvertive | LawId::SetMedial => unreachable!("set laws carry set tuples"),
        },
        Instance::Sets(xs) => {
            let f = |s: ElemSet| t.fmt_set(s);
            let inner = |x: ElemSet, y: ElemSet| (format!("({}*{})", f(x), f(y)), t.product(x, y));
            match law {
                LawId::SetLeftInvertive => {
                    let (a, b, c) = (xs[0], xs[1], xs[2]);
                    (chain(inner(a, b), (f(c), c)), chain(inner(c, b), (f(a), a)))
                }
                _ => {
                    let (a, b, c, d) = (xs[0], xs[1], xs[2], xs[3]);
                    (chain(inner(a, b), inner(c, d)), chain(inner(a, c), inner(b, d)))
                }
            }
        }
    }
}

fn tuple_names(t: &HyperTable, inst: &Instance) -> Vec<String> {
    match inst {
        Instance::Elements(xs) => xs.iter().map(|&x| t.name(x).to_string()).collect(),
        Instance::Sets(xs) => xs.iter().map(|&s| t.fmt_set(s)).collect(),
    }
}

const VARS: [&str; 4] = ["a", "b", "c", "d"];
const SET_VARS: [&str; 4] = ["A", "B", "C", "D"];

fn render_witness(t: &HyperTable, law: LawId, w: &Witness, label: &str) -> String {
    let vars = match w.tuple {
        Instance::Elements(_) => &VARS[..law.arity()],
        Instance::Sets(_) => &SET_VARS[..law.arity()],
    };
    let (lhs, rhs) = witness_chains(t, law, w);
    format!(
        "  {label} ({}) = ({}):\n    {lhs}\n    {rhs}\n    {} ≠ {}\n",
        vars.join(","),
        tuple_names(t, &w.tuple).join(","),
        t.fmt_set(w.lhs),
        t.fmt_set(w.rhs)
    )
}

pub fn law_report_text(t: &HyperTable, r: &LawReport, all: Option<&[Witness]>) -> String {
    let mut out = String::new();
    match r.verdict {
        Verdict::Holds => {
            let dims = vec![r.domain.to_string(); r.law.arity()].join("×");
            let noun = if r.instances == 1 { "instance" } else { "instances" };
            out.push_str(&format!("{}: law holds ({dims} {noun} checked)\n", r.law));
        }
        Verdict::NoViolationFound => {
            let (seed, count) = r.sampled.unwrap_or_default();
            out.push_str(&format!("{}: no violation found in {count} samples (seed {seed})\n", r.law));
        }
        Verdict::Fails => {
            out.push_str(&format!("{}: law fails: {}\n", r.law, r.law.statement()));
            if let Some(w) = &r.first_witness {
                out.push_str(&render_witness(t, r.law, w, "first witness"));
            }
        }
    }
    if let Some(count) = r.violation_count {
        let of = match r.sampled {
            Some((_, samples)) => format!("{samples} samples"),
            None => format!("{} instances", r.instances),
        };
        out.push_str(&format!("  violations: {count} of {of}\n"));
    }
    if let Some(ws) = all {
        for (i, w) in ws.iter().enumerate() {
            out.push_str(&render_witness(t, r.law, w, &format!("witness {}", i + 1)));
        }
    }
    out
}

#[derive(Serialize)]
pub struct WitnessJson {
    pub tuple: serde_json::Value,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub lhs_chain: String,
    pub rhs_chain: String,
}

#[derive(Serialize)]
pub struct LawReportJson {
    pub law: String,
    pub statement: String,
    pub verdict: &'static str,
    pub holds: bool,
    pub scope: &'static str,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub domain: u64,
    pub instances: u64,
    pub violation_count: Option<u64>,
    pub first_witness: Option<WitnessJson>,
    pub witnesses: Option<Vec<WitnessJson>>,
}

fn witness_json(t: &HyperTable, law: LawId, w: &Witness) -> WitnessJson {
    let tuple = match &w.tuple {
        Instance::Elements(xs) => serde_json::json!(xs.iter().map(|&x| t.name(x)).collect::<Vec<_>>()),
        Instance::Sets(xs) => serde_json::json!(xs.iter().map(|&s| names_of(t, s)).collect::<Vec<_>>()),
    };
    let (lhs_chain, rhs_chain) = witness_chains(t, law, w);
    WitnessJson { tuple, lhs: names_of(t, w.lhs), rhs: names_of(t, w.rhs), lhs_chain, rhs_chain }
}

pub fn law_report_json(t: &HyperTable, r: &LawReport, all: Option<&[Witness]>) -> LawReportJson {
    LawReportJson {
        law: r.law.name().to_string(),
        statement: r.law.statement().to_string(),
        verdict: match r.verdict {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NoViolationFound => "no_violation_found",
        },
        holds: r.holds(),
        scope: if r.sampled.is_some() { "sampled" } else { "exhaustive" },
        seed: r.sampled.map(|s| s.0),
        samples: r.sampled.map(|s| s.1),
        domain: r.domain,
        instances: r.instances,
        violation_count: r.violation_count,
        first_witness: r.first_witness.as_ref().map(|w| witness_json(t, r.law, w)),
        witnesses: all.map(|ws| ws.iter().map(|w| witness_json(t, r.law, w)).collect()),
    }
}

#[derive(Serialize)]
pub struct CheckJson {
    pub kind: &'static str,
    pub order: usize,
    pub holds: bool,
    pub reports: Vec<LawReportJson>,
}

pub fn check_json(t: &HyperTable, reports: &[(LawReport, Option<Vec<Witness>>)]) -> String {
    let doc = CheckJson {
        kind: "check",
        order: t.n(),
        holds: reports.iter().all(|(r, _)| !r.fails()),
        reports: reports.iter().map(|(r, all)| law_report_json(t, r, all.as_deref())).collect(),
    };
    to_json(&doc)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

pub fn power_family_text(t: &HyperTable, fam: &PowerFamily) -> String {
    let leaf = |_| "A".to_string();
    let mut out = format!(
        "A = {}, A^{} over {} bracketing{}:\n",
        t.fmt_set(fam.base),
        fam.exponent,
        fam.outcomes.len(),
        if fam.outcomes.len() == 1 { "" } else { "s" }
    );
    for (tree, value) in &fam.outcomes {
        out.push_str(&format!("  {:<14} {} = {}\n", tree.to_string(), tree.render(&leaf, "*"), t.fmt_set(*value)));
    }
    let distinct: Vec<_> = fam.distinct_values.iter().map(|&v| t.fmt_set(v)).collect();
    out.push_str(&format!("distinct values: {}\n", distinct.join(" ")));
    out.push_str(&format!(
        "well defined: {}\n",
        if fam.well_defined { "yes" } else { "no, the value depends on the bracketing" }
    ));
    out
}

#[derive(Serialize)]
struct OutcomeJson {
    bracketing: String,
    expression: String,
    value: Vec<String>,
}

#[derive(Serialize)]
struct PowerFamilyJson {
    kind: &'static str,
    base: Vec<String>,
    exponent: usize,
    catalan: u64,
    outcomes: Vec<OutcomeJson>,
    distinct_values: Vec<Vec<String>>,
    well_defined: bool,
}

pub fn power_family_json(t: &HyperTable, fam: &PowerFamily) -> String {
    let leaf = |_| "A".to_string();
    to_json(&PowerFamilyJson {
        kind: "power_family",
        base: names_of(t, fam.base),
        exponent: fam.exponent,
        catalan: catalan(fam.exponent - 1),
        outcomes: fam
            .outcomes
            .iter()
            .map(|(tree, v)| OutcomeJson {
                bracketing: tree.to_string(),
                expression: tree.render(&leaf, "*"),
                value: names_of(t, *v),
            })
            .collect(),
        distinct_values: fam.distinct_values.iter().map(|&v| names_of(t, v)).collect(),
        well_defined: fam.well_defined,
    })
}

fn mn_leaf(m: usize) -> impl Fn(usize) -> String {
    move |p| if p == m { "H".to_string() } else { "A".to_string() }
}

pub fn ideal_text(t: &HyperTable, v: &IdealVerdict) -> String {
    let subject = t.fmt_set(v.subject);
    match v.kind {
        IdealKind::OneSided(side) => {
            let mut out = format!(
                "A = {subject}: {} {side} hyperideal\n",
                if v.holds() { "is a" } else { "is not a" }
            );
            if let Some(e) = &v.escape {
                let (x, y) = match e.side {
                    Side::Left => (e.h, e.a),
                    _ => (e.a, e.h),
                };
                let which = if e.side == Side::Left { "H*A ⊄ A" } else { "A*H ⊄ A" };
                out.push_str(&format!(
                    "  {which}: {}∘{} = {} leaves A ({} escapes)\n",
                    t.name(x),
                    t.name(y),
                    t.fmt_set(e.product),
                    t.fmt_set(e.escaped)
                ));
            }
            out
        }
        IdealKind::Mn { m, n } => {
            let leaf = mn_leaf(m);
            let mut out = format!(
                "A = {subject}, (m,n) = ({m},{n}): {} of {} bracketings give a product inside A\n",
                v.bracketings_contained, v.bracketings
            );
            out.push_str(&format!(
                "  left-nested convention: {}\n",
                if v.holds_under_convention { "contained" } else { "not contained" }
            ));
            out.push_str(&format!("  bracketing dependent: {}\n", if v.bracketing_dependent { "yes" } else { "no" }));
            if let Some((tree, value)) = &v.failing_bracketing {
                out.push_str(&format!("  failing bracketing: {} = {}\n", tree.render(&leaf, "*"), t.fmt_set(*value)));
            }
            out.push_str(&format!("(m,n)-hyperideal under every bracketing: {}\n", if v.holds() { "yes" } else { "no" }));
            out
        }
    }
}

#[derive(Serialize)]
struct EscapeJson {
    side: String,
    pair: [String; 2],
    product: Vec<String>,
    escaped: Vec<String>,
}

#[derive(Serialize)]
struct FailingJson {
    bracketing: String,
    expression: String,
    value: Vec<String>,
}

#[derive(Serialize)]
struct IdealJson {
    kind: &'static str,
    subject: Vec<String>,
    ideal_kind: String,
    m: Option<usize>,
    n: Option<usize>,
    holds: bool,
    holds_under_convention: bool,
    bracketing_dependent: bool,
    bracketings: usize,
    bracketings_contained: usize,
    failing_bracketing: Option<FailingJson>,
    escape: Option<EscapeJson>,
}

pub fn ideal_json(t: &HyperTable, v: &IdealVerdict) -> String {
    let (ideal_kind, m, n) = match v.kind {
        IdealKind::OneSided(side) => (side.to_string(), None, None),
        IdealKind::Mn { m, n } => ("mn".to_string(), Some(m), Some(n)),
    };
    let leaf = mn_leaf(m.unwrap_or(0));
    to_json(&IdealJson {
        kind: "ideal",
        subject: names_of(t, v.subject),
        ideal_kind,
        m,
        n,
        holds: v.holds(),
        holds_under_convention: v.holds_under_convention,
        bracketing_dependent: v.bracketing_dependent,
        bracketings: v.bracketings,
        bracketings_contained: v.bracketings_contained,
        failing_bracketing: v.failing_bracketing.as_ref().map(|(tree, value)| FailingJson {
            bracketing: tree.to_string(),
            expression: tree.render(&leaf, "*"),
            value: names_of(t, *value),
        }),
        escape: v.escape.map(|e| {
            let (x, y) = match e.side {
                Side::Left => (e.h, e.a),
                _ => (e.a, e.h),
            };
            EscapeJson {
                side: e.side.to_string(),
                pair: [t.name(x).to_string(), t.name(y).to_string()],
                product: names_of(t, e.product),
                escaped: names_of(t, e.escaped),
            }
        }),
    })
}

#[derive(Serialize)]
struct EvalJson<'a> {
    kind: &'static str,
    expression: &'a str,
    value: Vec<String>,
}

pub fn eval_json(t: &HyperTable, source: &str, value: ElemSet) -> String {
    to_json(&EvalJson { kind: "eval", expression: source, value: names_of(t, value) })
}

#[derive(Serialize)]
pub struct EnumerationJson {
    pub kind: &'static str,
    pub order: usize,
    pub laws: Vec<String>,
    pub up_to_iso: bool,
    pub count: u64,
}

#[derive(Serialize)]
struct IsoJson {
    kind: &'static str,
    isomorphic: bool,
    /// Pairs `[name in first table, name in second table]`.
    witness: Option<Vec<[String; 2]>>,
}

pub fn iso_text(t1: &HyperTable, t2: &HyperTable, phi: Option<&[usize]>) -> String {
    match phi {
        Some(phi) => {
            let pairs: Vec<String> =
                phi.iter().enumerate().map(|(a, &b)| format!("{}↦{}", t1.name(a), t2.name(b))).collect();
            format!("isomorphic: {}\n", pairs.join(" "))
        }
        None => "not isomorphic\n".to_string(),
    }
}

pub fn iso_json(t1: &HyperTable, t2: &HyperTable, phi: Option<&[usize]>) -> String {
    to_json(&IsoJson {
        kind: "iso",
        isomorphic: phi.is_some(),
        witness: phi.map(|phi| {
            phi.iter().enumerate().map(|(a, &b)| [t1.name(a).to_string(), t2.name(b).to_string()]).collect()
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::power_family;
    use crate::fixtures;
    use crate::laws::{check_law, eval_element_law};

    #[test]
    fn chains_match_hand_computation() {
        let t = fixtures::table1();
        let idx = |s| t.index_of(s).unwrap();
        let (d, b) = (idx("d"), idx("b"));
        let (l, r) = eval_element_law(&t, LawId::LeftInvertive, &[d, d, b]);
        let w = Witness { tuple: Instance::Elements(vec![d, d, b]), lhs: l, rhs: r };
        let (lc, rc) = witness_chains(&t, LawId::LeftInvertive, &w);
        assert_eq!(lc, "(d∘d)*{b} = {d}*{b} = d∘b = {b}");
        assert_eq!(rc, "(b∘d)*{d} = {a,c}*{d} = (a∘d) ∪ (c∘d) = {a} ∪ {a,b} = {a,b}");
    }

    #[test]
    fn failing_report_shows_both_sides() {
        let t = fixtures::table1();
        let r = check_law(&t, LawId::LeftInvertive).unwrap();
        let text = law_report_text(&t, &r, None);
        assert!(text.contains("≠"), "{text}");
        assert!(text.contains("{a,b} ≠ {b}"), "{text}");
    }

    #[test]
    fn holding_report_counts_instances() {
        let t = HyperTable::total(3);
        let r = check_law(&t, LawId::LeftInvertive).unwrap();
        assert_eq!(law_report_text(&t, &r, None), "LeftInvertive: law holds (3×3×3 instances checked)\n");
    }

    #[test]
    fn power_family_json_shape() {
        let t = fixtures::table1();
        let fam = power_family(&t, t.parse_set("{b}").unwrap(), 3).unwrap();
        let v: serde_json::Value = serde_json::from_str(&power_family_json(&t, &fam)).unwrap();
        assert_eq!(v["exponent"], 3);
        assert_eq!(v["catalan"], 2);
        assert_eq!(v["distinct_values"], serde_json::json!([["a", "e"]]));
        assert_eq!(v["well_defined"], true);
        assert_eq!(v["outcomes"][0]["expression"], "A*(A*A)");
    }
}
