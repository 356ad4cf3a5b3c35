use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::expr::CardinalExpr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rel {
    Le,
    Lt,
    Eq,
    Ne,
    /// There is a surjection from the right onto the left.
    LeStar,
    Incomparable,
    /// `not (lhs <= rhs)`; the working form of strictness.
    NotLe,
}

impl Rel {
    pub const ALL: [Rel; 7] = [Rel::Le, Rel::Lt, Rel::Eq, Rel::Ne, Rel::LeStar, Rel::Incomparable, Rel::NotLe];

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::LeStar => "<=*",
            Rel::Incomparable => "||",
            Rel::NotLe => "!<=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Rel> {
        Rel::ALL.into_iter().find(|r| r.symbol() == s)
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A relation between two terms, without its justification.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Statement {
    pub lhs: CardinalExpr,
    pub rel: Rel,
    pub rhs: CardinalExpr,
}

impl Statement {
    pub fn new(lhs: CardinalExpr, rel: Rel, rhs: CardinalExpr) -> Self {
        Self { lhs, rel, rhs }
    }

    /// Parses `lhs REL rhs` with the relation symbols of [`Rel::symbol`].
    pub fn parse(s: &str) -> Result<Self> {
        let mut found = None;
        for rel in Rel::ALL {
            let pat = format!(" {} ", rel.symbol());
            if let Some(i) = s.find(&pat) {
                found = Some((i, pat.len(), rel));
                break;
            }
        }
        let (i, len, rel) = found.ok_or_else(|| Error::InvalidInput(format!("no relation symbol in `{s}`")))?;
        Ok(Self::new(s[..i].trim().parse()?, rel, s[i + len..].trim().parse()?))
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel, self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `<`, `=` and `||` split into `<=` and `!<=` facts.
    Unfold,
    CantorBernstein,
    FoldLt,
    FoldIncomparable,
    Transitivity,
    /// `x <= y`, `x !<= z` give `y !<= z`.
    StrictLeft,
    /// `y <= z`, `x !<= z` give `x !<= y`.
    StrictRight,
    LeImpliesLeStar,
    NotLeImpliesNe,
    NeSymmetric,
    /// `a <= b`, `a != b` give `b !<= a`.
    StrictFromNe,
    /// `a <=* b` gives `Pow(a) <= Pow(b)`.
    PowerMonotone,
    /// `seq(e) <= Seq(e)` gives `aleph0 <= e`.
    SeqCollapseCountable,
    /// `aleph0 <= Pow(e)` gives `Pow(e) !<= Seq(e)`.
    PowerAboveSeq,
    /// `aleph0 <= e` gives `Pow(e) !<= seq(e)`.
    PowerAboveSeqAll,
}

impl Rule {
    /// All statements this rule concludes from `premises`, in that order.
    pub fn apply(self, premises: &[&Statement]) -> Vec<Statement> {
        use Rel::*;
        let st = |l: &CardinalExpr, r: Rel, h: &CardinalExpr| Statement::new(l.clone(), r, h.clone());
        match (self, premises) {
            (Rule::Unfold, [p]) => match p.rel {
                Lt => vec![st(&p.lhs, Le, &p.rhs), st(&p.rhs, NotLe, &p.lhs)],
                Eq => vec![st(&p.lhs, Le, &p.rhs), st(&p.rhs, Le, &p.lhs)],
                Incomparable => vec![st(&p.lhs, NotLe, &p.rhs), st(&p.rhs, NotLe, &p.lhs)],
                _ => vec![],
            },
            (Rule::CantorBernstein, [p, q]) if p.rel == Le && q.rel == Le && p.lhs == q.rhs && p.rhs == q.lhs => {
                vec![st(&p.lhs, Eq, &p.rhs)]
            }
            (Rule::FoldLt, [p, q]) if p.rel == Le && q.rel == NotLe && p.lhs == q.rhs && p.rhs == q.lhs => {
                vec![st(&p.lhs, Lt, &p.rhs)]
            }
            (Rule::FoldIncomparable, [p, q]) if p.rel == NotLe && q.rel == NotLe && p.lhs == q.rhs && p.rhs == q.lhs => {
                vec![st(&p.lhs, Incomparable, &p.rhs)]
            }
            (Rule::Transitivity, [p, q]) if p.rel == Le && q.rel == Le && p.rhs == q.lhs => vec![st(&p.lhs, Le, &q.rhs)],
            (Rule::StrictLeft, [p, q]) if p.rel == Le && q.rel == NotLe && p.lhs == q.lhs => vec![st(&p.rhs, NotLe, &q.rhs)],
            (Rule::StrictRight, [p, q]) if p.rel == Le && q.rel == NotLe && p.rhs == q.rhs => vec![st(&q.lhs, NotLe, &p.lhs)],
            (Rule::LeImpliesLeStar, [p]) if p.rel == Le => vec![st(&p.lhs, LeStar, &p.rhs)],
            (Rule::NotLeImpliesNe, [p]) if p.rel == NotLe => vec![st(&p.lhs, Ne, &p.rhs)],
            (Rule::NeSymmetric, [p]) if p.rel == Ne => vec![st(&p.rhs, Ne, &p.lhs)],
            (Rule::StrictFromNe, [p, q]) if p.rel == Le && q.rel == Ne && p.lhs == q.lhs && p.rhs == q.rhs => {
                vec![st(&p.rhs, NotLe, &p.lhs)]
            }
            (Rule::PowerMonotone, [p]) if p.rel == LeStar => {
                vec![Statement::new(CardinalExpr::pow(p.lhs.clone()), Le, CardinalExpr::pow(p.rhs.clone()))]
            }
            (Rule::SeqCollapseCountable, [p]) if p.rel == Le => match (&p.lhs, &p.rhs) {
                (CardinalExpr::SeqAll(a), CardinalExpr::Seq(b)) if a == b => vec![st(&CardinalExpr::Aleph0, Le, a)],
                _ => vec![],
            },
            (Rule::PowerAboveSeq, [p]) if p.rel == Le && p.lhs == CardinalExpr::Aleph0 => match &p.rhs {
                CardinalExpr::Pow(e) => vec![st(&p.rhs, NotLe, &CardinalExpr::seq((**e).clone()))],
                _ => vec![],
            },
            (Rule::PowerAboveSeqAll, [p]) if p.rel == Le && p.lhs == CardinalExpr::Aleph0 => {
                vec![Statement::new(CardinalExpr::pow(p.rhs.clone()), NotLe, CardinalExpr::seq_all(p.rhs.clone()))]
            }
            _ => vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Axiom { tag: String },
    Derived { rule: Rule, premises: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFact {
    pub lhs: CardinalExpr,
    pub rel: Rel,
    pub rhs: CardinalExpr,
    pub provenance: Provenance,
}

impl RelationFact {
    pub fn axiom(lhs: CardinalExpr, rel: Rel, rhs: CardinalExpr, tag: impl Into<String>) -> Self {
        Self {
            lhs,
            rel,
            rhs,
            provenance: Provenance::Axiom { tag: tag.into() },
        }
    }

    pub fn statement(&self) -> Statement {
        Statement::new(self.lhs.clone(), self.rel, self.rhs.clone())
    }
}

impl fmt::Display for RelationFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel, self.rhs)?;
        match &self.provenance {
            Provenance::Axiom { tag } => write!(f, "  [{tag}]"),
            Provenance::Derived { rule, premises } => write!(f, "  [{rule:?} {premises:?}]"),
        }
    }
}

/// Facts in derivation order; premises always point backwards.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeductionTrace {
    pub nodes: Vec<RelationFact>,
}

impl DeductionTrace {
    /// Re-checks every derived node against its rule and premises.
    pub fn replay(&self) -> Result<()> {
        for (i, node) in self.nodes.iter().enumerate() {
            let Provenance::Derived { rule, premises } = &node.provenance else {
                continue;
            };
            if premises.iter().any(|&p| p >= i) {
                return Err(Error::InvalidInput(format!("node {i} cites a later node")));
            }
            let stated: Vec<Statement> = premises.iter().map(|&p| self.nodes[p].statement()).collect();
            let refs: Vec<&Statement> = stated.iter().collect();
            if !rule.apply(&refs).contains(&node.statement()) {
                return Err(Error::InvalidInput(format!("node {i} does not follow by {rule:?}")));
            }
        }
        Ok(())
    }

    /// The sub-DAG under `roots`, renumbered; roots keep their relative order at
    /// the end of their ancestors.
    pub fn restrict(&self, roots: &[usize]) -> (DeductionTrace, Vec<usize>) {
        let mut keep = BTreeSet::new();
        let mut stack: Vec<usize> = roots.to_vec();
        while let Some(i) = stack.pop() {
            if keep.insert(i) {
                if let Provenance::Derived { premises, .. } = &self.nodes[i].provenance {
                    stack.extend(premises);
                }
            }
        }
        let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let nodes = keep
            .iter()
            .map(|&i| {
                let mut node = self.nodes[i].clone();
                if let Provenance::Derived { premises, .. } = &mut node.provenance {
                    premises.iter_mut().for_each(|p| *p = renumber[p]);
                }
                node
            })
            .collect();
        (DeductionTrace { nodes }, roots.iter().map(|r| renumber[r]).collect())
    }
}

/// A pair of facts `a <= b` and `a !<= b`, with their joint derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contradiction {
    pub le: usize,
    pub not_le: usize,
    pub trace: DeductionTrace,
}

impl Contradiction {
    pub fn verify(&self) -> Result<()> {
        self.trace.replay()?;
        let (a, b) = (&self.trace.nodes[self.le], &self.trace.nodes[self.not_le]);
        if a.rel != Rel::Le || b.rel != Rel::NotLe || a.lhs != b.lhs || a.rhs != b.rhs {
            return Err(Error::InvalidInput("the two facts do not clash".into()));
        }
        Ok(())
    }
}

/// Depth of `Pow(Fin(m))`, the default bound for adding power terms.
pub const DEFAULT_DEPTH: usize = 2;

#[derive(Debug, Clone, Serialize)]
pub struct Closure {
    pub terms: Vec<CardinalExpr>,
    pub trace: DeductionTrace,
    pub contradiction: Option<Contradiction>,
    #[serde(skip)]
    index: HashMap<Statement, usize>,
}

impl Closure {
    pub fn is_consistent(&self) -> bool {
        self.contradiction.is_none()
    }

    /// The node deriving `lhs rel rhs`, if any.
    pub fn find(&self, st: &Statement) -> Option<usize> {
        self.index.get(st).copied()
    }

    pub fn holds(&self, lhs: &CardinalExpr, rel: Rel, rhs: &CardinalExpr) -> bool {
        self.find(&Statement::new(lhs.clone(), rel, rhs.clone())).is_some()
    }

    pub fn relations(&self, lhs: &CardinalExpr, rhs: &CardinalExpr) -> BTreeSet<Rel> {
        Rel::ALL.into_iter().filter(|&r| self.holds(lhs, r, rhs)).collect()
    }

    /// A self-contained derivation of one fact.
    pub fn derivation(&self, st: &Statement) -> Option<DeductionTrace> {
        self.find(st).map(|i| self.trace.restrict(&[i]).0)
    }

    /// Derived statements, excluding reflexive ones.
    pub fn statements(&self) -> BTreeSet<Statement> {
        self.trace.nodes.iter().map(RelationFact::statement).filter(|s| s.lhs != s.rhs).collect()
    }
}

/// ZF facts about every term `e` of the universe, given that `m` is infinite.
fn universal_axioms(terms: &BTreeSet<CardinalExpr>) -> Vec<RelationFact> {
    use CardinalExpr as C;
    let mut out = Vec::new();
    let mut add = |lhs: C, rel: Rel, rhs: C, tag: &str| {
        if terms.contains(&lhs) && terms.contains(&rhs) {
            out.push(RelationFact::axiom(lhs, rel, rhs, tag));
        }
    };
    for e in terms {
        add(e.clone(), Rel::Le, e.clone(), "reflexivity");
        add(e.clone(), Rel::Lt, C::pow(e.clone()), "cantor");
        add(C::fin(e.clone()), Rel::Lt, C::pow(e.clone()), "finite subsets below the power set");
        add(C::seq(e.clone()), Rel::Ne, C::pow(e.clone()), "one-to-one sequences differ from the power set");
        add(C::seq_all(e.clone()), Rel::Ne, C::pow(e.clone()), "sequences differ from the power set");
        add(e.clone(), Rel::Le, C::fin(e.clone()), "singletons");
        add(e.clone(), Rel::Le, C::seq(e.clone()), "sequences of length one");
        add(C::seq(e.clone()), Rel::Le, C::seq_all(e.clone()), "one-to-one sequences are sequences");
        add(C::sq(e.clone()), Rel::Le, C::fin_n(2, e.clone()), "kuratowski pairs");
        add(C::seq(e.clone()), Rel::Le, C::fin_n(2, e.clone()), "sequences as chains of initial segments");
        add(e.clone(), Rel::Le, C::pair2(e.clone()), "pairs with a fixed point");
        add(C::pair2(e.clone()), Rel::Le, C::fin(e.clone()), "pairs are finite sets");
        add(e.clone(), Rel::Le, C::sq(e.clone()), "diagonal");
        add(C::fin(e.clone()), Rel::LeStar, C::seq(e.clone()), "range of a sequence");
        add(C::part(e.clone()), Rel::Le, C::pow(C::pair2(e.clone())), "partitions as edge sets");
        if let C::Mul(n, inner) = e {
            add((**inner).clone(), Rel::Le, e.clone(), "first copy");
            add(e.clone(), Rel::Le, C::mul(n + 1, (**inner).clone()), "one more copy");
        }
    }
    out
}

/// The terms of `facts` with their subterms and the base terms, closed under
/// `Pow` as far as depth `depth`.
pub fn universe(facts: &[RelationFact], depth: usize) -> BTreeSet<CardinalExpr> {
    use CardinalExpr as C;
    let mut terms: BTreeSet<C> = [C::M, C::Aleph0, C::fin(C::M), C::seq(C::M), C::seq_all(C::M), C::pow(C::M)].into();
    for f in facts {
        terms.extend(f.lhs.subterms());
        terms.extend(f.rhs.subterms());
    }
    loop {
        let powers: Vec<C> = terms
            .iter()
            .filter(|e| e.depth() < depth)
            .map(|e| C::pow(e.clone()))
            .filter(|p| !terms.contains(p))
            .collect();
        if powers.is_empty() {
            return terms;
        }
        terms.extend(powers);
    }
}

/// [`close_with`] at [`DEFAULT_DEPTH`].
pub fn close(facts: &[RelationFact]) -> Closure {
    close_with(facts, DEFAULT_DEPTH)
}

struct Engine {
    terms: BTreeSet<CardinalExpr>,
    trace: DeductionTrace,
    index: HashMap<Statement, usize>,
    by_lhs: HashMap<(Rel, CardinalExpr), Vec<usize>>,
    by_rhs: HashMap<(Rel, CardinalExpr), Vec<usize>>,
    queue: VecDeque<usize>,
}

impl Engine {
    fn add(&mut self, fact: RelationFact) -> Option<usize> {
        let st = fact.statement();
        if self.index.contains_key(&st) || !self.terms.contains(&st.lhs) || !self.terms.contains(&st.rhs) {
            return None;
        }
        let id = self.trace.nodes.len();
        self.index.insert(st.clone(), id);
        self.by_lhs.entry((st.rel, st.lhs.clone())).or_default().push(id);
        self.by_rhs.entry((st.rel, st.rhs)).or_default().push(id);
        self.trace.nodes.push(fact);
        self.queue.push_back(id);
        Some(id)
    }

    fn derive(&mut self, rule: Rule, premises: &[usize]) {
        let stated: Vec<Statement> = premises.iter().map(|&p| self.trace.nodes[p].statement()).collect();
        let refs: Vec<&Statement> = stated.iter().collect();
        for st in rule.apply(&refs) {
            self.add(RelationFact {
                lhs: st.lhs,
                rel: st.rel,
                rhs: st.rhs,
                provenance: Provenance::Derived {
                    rule,
                    premises: premises.to_vec(),
                },
            });
        }
    }

    fn lookup(&self, lhs: &CardinalExpr, rel: Rel, rhs: &CardinalExpr) -> Option<usize> {
        self.index.get(&Statement::new(lhs.clone(), rel, rhs.clone())).copied()
    }

    fn from_lhs(&self, rel: Rel, e: &CardinalExpr) -> Vec<usize> {
        self.by_lhs.get(&(rel, e.clone())).cloned().unwrap_or_default()
    }

    fn from_rhs(&self, rel: Rel, e: &CardinalExpr) -> Vec<usize> {
        self.by_rhs.get(&(rel, e.clone())).cloned().unwrap_or_default()
    }

    fn clash(&self, id: usize) -> Option<(usize, usize)> {
        let st = self.trace.nodes[id].statement();
        match st.rel {
            Rel::Le => self.lookup(&st.lhs, Rel::NotLe, &st.rhs).map(|n| (id, n)),
            Rel::NotLe => self.lookup(&st.lhs, Rel::Le, &st.rhs).map(|l| (l, id)),
            _ => None,
        }
    }

    fn step(&mut self, id: usize) {
        let st = self.trace.nodes[id].statement();
        let (a, b) = (&st.lhs, &st.rhs);
        match st.rel {
            Rel::Lt | Rel::Eq | Rel::Incomparable => self.derive(Rule::Unfold, &[id]),
            Rel::Le => {
                self.derive(Rule::LeImpliesLeStar, &[id]);
                self.derive(Rule::SeqCollapseCountable, &[id]);
                self.derive(Rule::PowerAboveSeq, &[id]);
                self.derive(Rule::PowerAboveSeqAll, &[id]);
                if let Some(q) = self.lookup(b, Rel::Le, a) {
                    self.derive(Rule::CantorBernstein, &[id, q]);
                    self.derive(Rule::CantorBernstein, &[q, id]);
                }
                if let Some(q) = self.lookup(b, Rel::NotLe, a) {
                    self.derive(Rule::FoldLt, &[id, q]);
                }
                if let Some(q) = self.lookup(a, Rel::Ne, b) {
                    self.derive(Rule::StrictFromNe, &[id, q]);
                }
                for q in self.from_lhs(Rel::Le, b) {
                    self.derive(Rule::Transitivity, &[id, q]);
                }
                for q in self.from_rhs(Rel::Le, a) {
                    self.derive(Rule::Transitivity, &[q, id]);
                }
                for q in self.from_lhs(Rel::NotLe, a) {
                    self.derive(Rule::StrictLeft, &[id, q]);
                }
                for q in self.from_rhs(Rel::NotLe, b) {
                    self.derive(Rule::StrictRight, &[id, q]);
                }
            }
            Rel::NotLe => {
                self.derive(Rule::NotLeImpliesNe, &[id]);
                if let Some(q) = self.lookup(b, Rel::NotLe, a) {
                    self.derive(Rule::FoldIncomparable, &[id, q]);
                    self.derive(Rule::FoldIncomparable, &[q, id]);
                }
                if let Some(q) = self.lookup(b, Rel::Le, a) {
                    self.derive(Rule::FoldLt, &[q, id]);
                }
                for q in self.from_lhs(Rel::Le, a) {
                    self.derive(Rule::StrictLeft, &[q, id]);
                }
                for q in self.from_rhs(Rel::Le, b) {
                    self.derive(Rule::StrictRight, &[q, id]);
                }
            }
            Rel::Ne => {
                self.derive(Rule::NeSymmetric, &[id]);
                if let Some(q) = self.lookup(a, Rel::Le, b) {
                    self.derive(Rule::StrictFromNe, &[q, id]);
                }
            }
            Rel::LeStar => self.derive(Rule::PowerMonotone, &[id]),
        }
    }
}

/// Least fixed point of `facts` plus the universal axioms under the rule
/// set, over the term universe of [`universe`]. Stops at the first clash of
/// `a <= b` with `a !<= b`.
pub fn close_with(facts: &[RelationFact], depth: usize) -> Closure {
    let terms = universe(facts, depth);
    let mut engine = Engine {
        trace: DeductionTrace::default(),
        index: HashMap::new(),
        by_lhs: HashMap::new(),
        by_rhs: HashMap::new(),
        queue: VecDeque::new(),
        terms,
    };
    for f in universal_axioms(&engine.terms) {
        engine.add(f);
    }
    for f in facts {
        engine.add(f.clone());
    }
    let mut contradiction = None;
    while let Some(id) = engine.queue.pop_front() {
        if let Some((le, not_le)) = engine.clash(id) {
            let (trace, roots) = engine.trace.restrict(&[le, not_le]);
            contradiction = Some(Contradiction {
                le: roots[0],
                not_le: roots[1],
                trace,
            });
            break;
        }
        engine.step(id);
    }
    Closure {
        terms: engine.terms.into_iter().collect(),
        trace: engine.trace,
        contradiction,
        index: engine.index,
    }
}
