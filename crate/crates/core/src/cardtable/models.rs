use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::closure::{RelationFact, Rel};
use super::expr::CardinalExpr as C;
use crate::error::{Error, Result};

/// The built-in axiom sets. Each describes the cardinality `m` of the atoms
/// of one permutation model; `Countable` is `m = aleph0`, included so that
/// the equalities of the table have a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Fraenkel,
    Mostowski,
    Vs,
    Vc,
    Vp,
    Countable,
}

impl Model {
    pub const ALL: [Model; 6] = [Model::Fraenkel, Model::Mostowski, Model::Vs, Model::Vc, Model::Vp, Model::Countable];

    /// The five permutation models, without the countable reference point.
    pub const PERMUTATION: [Model; 5] = [Model::Fraenkel, Model::Mostowski, Model::Vs, Model::Vc, Model::Vp];

    pub fn name(self) -> &'static str {
        match self {
            Model::Fraenkel => "fraenkel",
            Model::Mostowski => "mostowski",
            Model::Vs => "vs",
            Model::Vc => "vc",
            Model::Vp => "vp",
            Model::Countable => "countable",
        }
    }

    pub fn axioms(self) -> Vec<RelationFact> {
        let m = C::M;
        let fin = C::fin(m.clone());
        let seq = C::seq(m.clone());
        let seq_all = C::seq_all(m.clone());
        let pow = C::pow(m.clone());
        let tag = |what: &str| format!("{}: {what}", self.name());
        let ax = |l: &C, r: Rel, h: &C, what: &str| RelationFact::axiom(l.clone(), r, h.clone(), tag(what));
        let chain = |terms: &[C], what: &str| -> Vec<RelationFact> {
            terms.windows(2).map(|w| ax(&w[0], Rel::Lt, &w[1], what)).collect()
        };
        match self {
            Model::Fraenkel => vec![
                ax(&fin, Rel::Incomparable, &seq, "no supported injection either way"),
                ax(&fin, Rel::Incomparable, &seq_all, "no supported injection either way"),
                ax(&seq, Rel::Incomparable, &pow, "no supported injection either way"),
                ax(&seq_all, Rel::Incomparable, &pow, "no supported injection either way"),
            ],
            Model::Mostowski => {
                let mut out = chain(
                    &[
                        m.clone(),
                        C::pair2(m.clone()),
                        C::sq(m.clone()),
                        fin.clone(),
                        pow.clone(),
                        seq.clone(),
                        C::fin_n(2, m.clone()),
                        C::seq(fin.clone()),
                        C::fin(pow.clone()),
                        C::fin_n(3, m.clone()),
                        C::fin_n(4, m.clone()),
                        seq_all.clone(),
                        C::pow(fin.clone()),
                    ],
                    "long chain",
                );
                out.push(ax(&C::pow(fin.clone()), Rel::Eq, &C::pow(pow.clone()), "long chain"));
                out
            }
            Model::Vs => chain(&[seq, seq_all, fin, pow], "sequences below finite subsets"),
            Model::Vc => chain(&[fin, seq, pow, seq_all], "power set between the sequence kinds"),
            Model::Vp => vec![ax(&C::sq(m.clone()), Rel::Lt, &C::pair2(m.clone()), "ordered pairs below unordered")],
            Model::Countable => {
                let mut out = vec![ax(&m, Rel::Eq, &C::Aleph0, "countable")];
                for e in [fin, seq, seq_all, C::sq(m.clone()), C::pair2(m.clone()), C::fin_n(2, m.clone())] {
                    out.push(ax(&m, Rel::Eq, &e, "countable"));
                }
                out
            }
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown model `{s}`")))
    }
}
