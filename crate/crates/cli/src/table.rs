//! `table`: closure of a model's axioms, optionally with extra facts.

use anyhow::{Context, Result};
use serde_json::json;

use cardlab_core::cardtable::{close, expected_chains, CardinalExpr as C, Model, Rel, RelationFact, Statement};

use crate::report::Check;

/// Terms whose pairwise relations the report lists.
fn terms() -> Vec<C> {
    vec![
        C::M,
        C::fin(C::M),
        C::seq(C::M),
        C::seq_all(C::M),
        C::pow(C::M),
        C::sq(C::M),
        C::pair2(C::M),
        C::fin(C::fin(C::M)),
        C::pow(C::fin(C::M)),
    ]
}

/// The most informative relation known between `a` and `b`, if any.
fn strongest(closure: &cardlab_core::cardtable::Closure, a: &C, b: &C) -> Option<Rel> {
    [Rel::Eq, Rel::Lt, Rel::Incomparable, Rel::Le, Rel::LeStar, Rel::Ne, Rel::NotLe]
        .into_iter()
        .find(|r| closure.holds(a, *r, b))
}

pub fn table(model: Option<Model>, extra: &[String]) -> Result<Vec<Check>> {
    let mut facts = model.map(Model::axioms).unwrap_or_default();
    for text in extra {
        let st = Statement::parse(text).with_context(|| format!("fact {text:?}"))?;
        facts.push(RelationFact::axiom(st.lhs, st.rel, st.rhs, "given"));
    }
    let name = model.map_or_else(|| "facts".to_string(), |m| m.to_string());
    let closure = close(&facts);
    let mut checks = Vec::new();

    match &closure.contradiction {
        None => checks.push(
            Check::new(format!("table/{name}/consistent"), true, format!("{} facts, no contradiction", closure.trace.nodes.len()))
                .with_data(json!({ "facts": closure.trace.nodes.len() })),
        ),
        Some(c) => {
            let le = c.trace.nodes[c.le].statement();
            let not_le = c.trace.nodes[c.not_le].statement();
            let replays = c.verify().is_ok();
            let steps: Vec<String> = c.trace.nodes.iter().map(|n| n.statement().to_string()).collect();
            checks.push(
                Check::new(
                    format!("table/{name}/consistent"),
                    false,
                    format!("contradiction: {le} against {not_le}; trace of {} steps replays: {replays}", steps.len()),
                )
                .with_data(json!({ "trace": steps, "replays": replays })),
            );
        }
    }

    if closure.contradiction.is_none() {
        let ts = terms();
        let mut relations = Vec::new();
        for (i, a) in ts.iter().enumerate() {
            for b in &ts[i + 1..] {
                let forward = strongest(&closure, a, b);
                let backward = strongest(&closure, b, a);
                // print strict relations left to right
                let line = match (forward, backward) {
                    (_, Some(Rel::Lt)) => format!("{b} < {a}"),
                    (Some(r), _) => format!("{a} {r} {b}"),
                    (None, Some(r)) => format!("{b} {r} {a}"),
                    (None, None) => continue,
                };
                relations.push(line);
            }
        }
        checks.push(
            Check::new(format!("table/{name}/relations"), true, relations.join(", ")).with_data(json!({ "relations": relations })),
        );
        if let Some(m) = model {
            for (k, chain) in expected_chains().into_iter().filter(|(cm, _)| *cm == m).map(|(_, c)| c).enumerate() {
                let ok = chain.windows(2).all(|w| closure.holds(&w[0], Rel::Lt, &w[1]));
                let text: Vec<String> = chain.iter().map(C::to_string).collect();
                checks.push(Check::new(format!("table/{name}/chain-{k}"), ok, text.join(" < ")));
            }
        }
    }
    Ok(checks)
}
