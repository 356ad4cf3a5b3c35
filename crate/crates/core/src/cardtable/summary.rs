use serde::{Deserialize, Serialize};

use super::closure::{close, Closure, Contradiction, Rel, RelationFact, Statement};
use super::expr::CardinalExpr as C;
use super::models::Model;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelCheck {
    pub model: Model,
    pub axioms: usize,
    pub facts: usize,
    pub consistent: bool,
}

/// One relation claimed possible between two terms, with the models whose
/// closure derives it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellCheck {
    pub lhs: C,
    pub rhs: C,
    pub rel: Rel,
    /// Provable outright, so every model must derive it.
    pub provable: bool,
    pub realized_by: Vec<Model>,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainCheck {
    pub chain: Vec<C>,
    pub model: Model,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioCheck {
    pub facts: Vec<Statement>,
    pub contradiction: Option<Contradiction>,
    pub replays: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryReport {
    pub models: Vec<ModelCheck>,
    pub cells: Vec<CellCheck>,
    pub chains: Vec<ChainCheck>,
    pub forbidden: ScenarioCheck,
    pub ok: bool,
}

impl SummaryReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for m in self.models.iter().filter(|m| !m.consistent) {
            out.push(format!("model {} closes to a contradiction", m.model));
        }
        for c in self.cells.iter().filter(|c| !c.ok) {
            out.push(format!("cell {} {} {} not realized as claimed", c.lhs, c.rel, c.rhs));
        }
        for c in self.chains.iter().filter(|c| !c.ok) {
            let names: Vec<String> = c.chain.iter().map(C::to_string).collect();
            out.push(format!("chain {} missing from {}", names.join(" < "), c.model));
        }
        if !self.forbidden.ok {
            out.push("forbidden pattern did not close to a replayable contradiction".into());
        }
        out
    }
}

/// Relations the table claims possible for each pair among `m`, `Fin(m)`,
/// `Seq(m)`, `seq(m)`, `Pow(m)`, read from row to column. `>` appears as `<`
/// with the sides swapped; provable entries are flagged.
pub fn table_cells() -> Vec<(C, Rel, C, bool)> {
    let m = C::M;
    let fin = C::fin(C::M);
    let seq = C::seq(C::M);
    let seq_all = C::seq_all(C::M);
    let pow = C::pow(C::M);
    let mut out = Vec::new();
    for e in [&fin, &seq, &seq_all] {
        out.push((m.clone(), Rel::Eq, e.clone(), false));
        out.push((m.clone(), Rel::Lt, e.clone(), false));
    }
    out.push((m.clone(), Rel::Lt, pow.clone(), true));
    for e in [&seq, &seq_all] {
        out.push((e.clone(), Rel::Lt, fin.clone(), false));
        out.push((fin.clone(), Rel::Eq, e.clone(), false));
        out.push((fin.clone(), Rel::Lt, e.clone(), false));
        out.push((fin.clone(), Rel::Incomparable, e.clone(), false));
    }
    out.push((fin.clone(), Rel::Lt, pow.clone(), true));
    out.push((seq.clone(), Rel::Eq, seq_all.clone(), false));
    out.push((seq.clone(), Rel::Lt, seq_all.clone(), false));
    for e in [&seq, &seq_all] {
        out.push((pow.clone(), Rel::Lt, e.clone(), false));
        out.push((e.clone(), Rel::Ne, pow.clone(), true));
        out.push((e.clone(), Rel::Lt, pow.clone(), false));
        out.push((e.clone(), Rel::Incomparable, pow.clone(), false));
    }
    out
}

/// Chains each model must contain: the four possible orders of `Seq(m)`,
/// `seq(m)` and `Pow(m)` when comparable, and the consistency statements
/// that the models witness.
pub fn expected_chains() -> Vec<(Model, Vec<C>)> {
    let m = C::M;
    let fin = C::fin(C::M);
    let seq = C::seq(C::M);
    let seq_all = C::seq_all(C::M);
    let pow = C::pow(C::M);
    vec![
        (Model::Countable, vec![seq.clone(), pow.clone()]),
        (Model::Vs, vec![seq.clone(), seq_all.clone(), pow.clone()]),
        (Model::Vc, vec![seq.clone(), pow.clone(), seq_all.clone()]),
        (Model::Mostowski, vec![pow.clone(), seq.clone(), seq_all.clone()]),
        (Model::Mostowski, vec![m.clone(), fin.clone(), pow.clone(), seq.clone(), seq_all.clone()]),
        (Model::Mostowski, vec![m.clone(), seq_all.clone()]),
        (Model::Vp, vec![C::sq(m.clone()), C::pair2(m.clone())]),
        (Model::Vc, vec![fin.clone(), seq.clone(), pow.clone(), seq_all.clone()]),
        (Model::Vs, vec![seq, seq_all, fin, pow]),
    ]
}

fn chain_holds(closure: &Closure, chain: &[C]) -> bool {
    chain.windows(2).all(|w| closure.holds(&w[0], Rel::Lt, &w[1]))
}

/// `Pow(m) <= Seq(m)` together with `Seq(m) = seq(m)`.
pub fn forbidden_pattern() -> Vec<RelationFact> {
    let seq = C::seq(C::M);
    vec![
        RelationFact::axiom(C::pow(C::M), Rel::Le, seq.clone(), "scenario"),
        RelationFact::axiom(seq, Rel::Eq, C::seq_all(C::M), "scenario"),
    ]
}

pub fn check_forbidden(facts: &[RelationFact]) -> ScenarioCheck {
    let closure = close(facts);
    let replays = closure.contradiction.as_ref().is_some_and(|c| c.verify().is_ok());
    ScenarioCheck {
        facts: facts.iter().map(RelationFact::statement).collect(),
        ok: replays,
        replays,
        contradiction: closure.contradiction,
    }
}

pub fn check_summary_table() -> SummaryReport {
    let closures: Vec<(Model, Closure)> = Model::ALL.into_iter().map(|m| (m, close(&m.axioms()))).collect();
    let models = closures
        .iter()
        .map(|(m, c)| ModelCheck {
            model: *m,
            axioms: m.axioms().len(),
            facts: c.trace.nodes.len(),
            consistent: c.is_consistent(),
        })
        .collect();
    let cells = table_cells()
        .into_iter()
        .map(|(lhs, rel, rhs, provable)| {
            let realized_by: Vec<Model> = closures
                .iter()
                .filter(|(_, c)| c.is_consistent() && c.holds(&lhs, rel, &rhs))
                .map(|(m, _)| *m)
                .collect();
            let ok = if provable {
                realized_by.len() == closures.len()
            } else {
                !realized_by.is_empty()
            };
            CellCheck {
                lhs,
                rhs,
                rel,
                provable,
                realized_by,
                ok,
            }
        })
        .collect();
    let chains = expected_chains()
        .into_iter()
        .map(|(model, chain)| {
            let closure = &closures.iter().find(|(m, _)| *m == model).unwrap().1;
            ChainCheck {
                ok: closure.is_consistent() && chain_holds(closure, &chain),
                chain,
                model,
            }
        })
        .collect();
    let forbidden = check_forbidden(&forbidden_pattern());
    let mut report = SummaryReport {
        models,
        cells,
        chains,
        forbidden,
        ok: false,
    };
    report.ok = report.failures().is_empty();
    report
}
