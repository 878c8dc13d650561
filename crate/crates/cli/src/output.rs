//! JSON objects, CSV fields and graph exports.

use std::io::{self, Write};

use lexworld::entropy::EntropyResult;
use lexworld::renorm::{Classification, RenormKind, Run, Runs, Tag};
use lexworld::sft::{Automaton, ComponentReport, MaxEntropyMeasure};
use lexworld::{EPSeq, Error};
use serde_json::{json, Map, Value};

/// Rounds to 12 significant digits and prints the shortest decimal form.
pub fn fmt_float(x: f64) -> String {
    round12(x).to_string()
}

fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn num(x: f64) -> Value {
    json!(round12(x))
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

fn seq(x: &EPSeq) -> Value {
    json!(x.to_string())
}

pub fn entropy_fields(e: &EntropyResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("kappa".into(), opt_num(e.kappa));
    m.insert("h_bits".into(), num(e.h_bits));
    m.insert("dim".into(), num(e.dim));
    m.insert(
        "bracket".into(),
        e.bracket.map_or(Value::Null, |(lo, hi)| json!([num(lo), num(hi)])),
    );
    m
}

pub fn entropy_json(alpha: &EPSeq, beta: &EPSeq, e: &EntropyResult) -> Value {
    let mut m = Map::new();
    m.insert("alpha".into(), seq(alpha));
    m.insert("beta".into(), seq(beta));
    m.extend(entropy_fields(e));
    Value::Object(m)
}

fn runs_json(r: &Runs) -> Value {
    let one = |run: &Run| json!([run.symbol, run.len.map_or(json!("inf"), |n| json!(n))]);
    json!({
        "pre": r.pre.iter().map(one).collect::<Vec<_>>(),
        "per": r.per.iter().map(one).collect::<Vec<_>>(),
    })
}

pub fn tag_json(tag: &Tag) -> (Value, Map<String, Value>) {
    let mut extra = Map::new();
    match tag {
        Tag::Extremal(e) => {
            extra.insert("extremal_reason".into(), json!(e.name()));
        }
        Tag::HofbauerNonIE { k, mirrored, level } => {
            extra.insert("hofbauer".into(), json!({"k": k, "mirrored": mirrored, "level": level}));
        }
        _ => {}
    }
    (json!(tag.name()), extra)
}

pub fn classification_json(c: &Classification) -> Value {
    let mut m = Map::new();
    m.insert("alpha".into(), seq(&c.alpha));
    m.insert("beta".into(), seq(&c.beta));
    if let Some(kind) = c.hole {
        m.insert("hole_kind".into(), json!(kind.name()));
    }
    let (tag, extra) = tag_json(&c.tag);
    m.insert("tag".into(), tag);
    m.insert("level".into(), json!(c.level));
    m.insert(
        "ratios".into(),
        json!(c.ratios.iter().map(|r| r.to_string()).collect::<Vec<_>>()),
    );
    m.insert("trivial".into(), json!(c.trivial()));
    m.extend(entropy_fields(&c.entropy));
    m.insert("ie".into(), json!(c.ie.name()));
    m.insert("ie_provenance".into(), json!(c.ie_provenance.name()));
    m.insert("oracle_ie".into(), c.oracle.map_or(Value::Null, |o| json!(o.name())));

    let mut w = extra;
    if let (Some(a), Some(b)) = (&c.base_alpha, &c.base_beta) {
        w.insert("base_alpha".into(), seq(a));
        w.insert("base_beta".into(), seq(b));
    }
    if let Some(base) = &c.base_entropy {
        w.insert("base_h_bits".into(), num(base.h_bits));
    }
    if let Some(d) = c.scaling_defect() {
        w.insert("scaling_defect".into(), num(d));
    }
    if let Some(r) = &c.renorm {
        let kind = match r.kind {
            RenormKind::Associated => json!("Associated"),
            RenormKind::Sturmian(q) => json!(format!("Sturmian {q}")),
        };
        w.insert(
            "associated_pair".into(),
            json!({
                "omega": r.pair.omega().to_string(),
                "nu": r.pair.nu().to_string(),
                "kind": kind,
                "alpha_blocks": seq(&r.alpha_blocks),
                "beta_blocks": seq(&r.beta_blocks),
                "alpha_exponents": runs_json(&r.alpha_exponents()),
                "beta_exponents": runs_json(&r.beta_exponents()),
            }),
        );
    }
    if let Some(bs) = &c.beta_shift {
        w.insert("beta_shift".into(), json!({"parry": seq(&bs.parry), "beta": num(bs.beta)}));
    }
    m.insert("witnesses".into(), Value::Object(w));
    Value::Object(m)
}

pub fn components_json(a: &Automaton, comps: &[ComponentReport]) -> Value {
    let list: Vec<Value> = comps
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "states": c.states.iter().map(|&s| a.state_label(s)).collect::<Vec<_>>(),
                "perron_entropy_bits": num(c.perron_entropy_bits),
                "radius_bounds": [num(c.radius_bounds.0), num(c.radius_bounds.1)],
                "is_trivial_cycle": c.is_trivial_cycle,
            })
        })
        .collect();
    json!({
        "alpha": seq(a.alpha()),
        "beta": seq(a.beta()),
        "states": a.len(),
        "initial": a.state_label(a.initial()),
        "components": list,
    })
}

pub fn measure_json(a: &Automaton, m: &MaxEntropyMeasure) -> Value {
    json!({
        "component": m.component,
        "states": m.states.iter().map(|&s| a.state_label(s)).collect::<Vec<_>>(),
        "stationary": m.stationary.iter().map(|&p| num(p)).collect::<Vec<_>>(),
        "edges": m.edges.iter().map(|e| json!({
            "from": a.state_label(e.from),
            "symbol": e.symbol,
            "to": a.state_label(e.to),
            "probability": num(e.probability),
        })).collect::<Vec<_>>(),
        "entropy_bits": num(m.entropy_bits),
        "perron_entropy_bits": num(m.perron_entropy_bits),
    })
}

pub fn error_json(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), json!(e.kind()));
    m.insert("message".into(), json!(e.to_string()));
    if let Error::NotAdmissible(x) = e {
        m.insert("reason".into(), json!(x.name()));
    }
    Value::Object(m)
}

/// One `from symbol to` line per transition.
pub fn write_edges(a: &Automaton, out: &mut impl Write) -> io::Result<()> {
    for (s, c, t) in a.edges() {
        writeln!(out, "{} {} {}", a.state_label(s), c, a.state_label(t))?;
    }
    Ok(())
}

/// Graphviz digraph; states of each component share a cluster.
pub fn write_dot(a: &Automaton, comps: &[ComponentReport], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "digraph automaton {{")?;
    writeln!(out, "  rankdir=LR;")?;
    writeln!(out, "  \"{}\" [shape=doublecircle];", a.state_label(a.initial()))?;
    for c in comps {
        writeln!(out, "  subgraph cluster_{} {{", c.id)?;
        writeln!(out, "    label=\"component {} h={}\";", c.id, fmt_float(c.perron_entropy_bits))?;
        for &s in &c.states {
            writeln!(out, "    \"{}\";", a.state_label(s))?;
        }
        writeln!(out, "  }}")?;
    }
    for (s, c, t) in a.edges() {
        writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", a.state_label(s), a.state_label(t), c)?;
    }
    writeln!(out, "}}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_twelve_digits() {
        assert_eq!(fmt_float(0.694_241_913_630_617_3), "0.694241913631");
        assert_eq!(fmt_float(1.0), "1");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
    }
}
