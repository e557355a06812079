//! Co-safe temporal-logic task formulas over finite traces: abstract syntax,
//! parsing, trace semantics, progression, and simplification.

mod parser;
mod progress;
mod semantics;

pub use parser::{parse, parse_label_set, parse_task_file, ParseError, TaskDef};
pub use progress::{
    goal_propositions, progress, satisfaction_by_progression, simplify, ProgressOptions,
    Satisfaction,
};
pub use semantics::evaluate;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum LtlError {
    #[error("invalid proposition name {0:?} (expected [a-z_][a-z0-9_]*)")]
    BadPropositionName(String),
    #[error("trace index {index} out of range for trace of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("a trace must contain at least one label set")]
    EmptyTrace,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// An atomic proposition such as `got_wood` or `is_night`.
///
/// Names are interned behind an `Arc<str>`; clones are cheap and equality is
/// by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Proposition(Arc<str>);

impl Proposition {
    /// Creates a proposition. Names must match `[a-z_][a-z0-9_]*`.
    pub fn new(name: &str) -> Result<Self, LtlError> {
        let mut chars = name.chars();
        let head_ok = chars
            .next()
            .is_some_and(|c| c.is_ascii_lowercase() || c == '_');
        let tail_ok = chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
        if head_ok && tail_ok {
            Ok(Proposition(Arc::from(name)))
        } else {
            Err(LtlError::BadPropositionName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Proposition({})", self.0)
    }
}

/// The set of propositions emitted by the event detector at one step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelSet(BTreeSet<Proposition>);

impl LabelSet {
    pub fn empty() -> Self {
        LabelSet(BTreeSet::new())
    }

    pub fn contains(&self, p: &Proposition) -> bool {
        self.0.contains(p)
    }

    pub fn insert(&mut self, p: Proposition) {
        self.0.insert(p);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Proposition> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Proposition> for LabelSet {
    fn from_iter<I: IntoIterator<Item = Proposition>>(iter: I) -> Self {
        LabelSet(iter.into_iter().collect())
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// A finite, non-empty sequence of label sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace(Vec<LabelSet>);

impl Trace {
    pub fn new(steps: Vec<LabelSet>) -> Result<Self, LtlError> {
        if steps.is_empty() {
            Err(LtlError::EmptyTrace)
        } else {
            Ok(Trace(steps))
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the last step.
    pub fn last_index(&self) -> usize {
        self.0.len() - 1
    }

    pub fn step(&self, i: usize) -> &LabelSet {
        &self.0[i]
    }

    pub fn steps(&self) -> &[LabelSet] {
        &self.0
    }
}

/// Formula syntax tree. Implication is desugared to `!a | b` at construction,
/// so the progression rules never see it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Prop(Proposition),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Next(Arc<Formula>),
    Always(Arc<Formula>),
    Eventually(Arc<Formula>),
    Until(Arc<Formula>, Arc<Formula>),
    Release(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn prop(p: Proposition) -> Self {
        Formula::Prop(p)
    }

    /// Parses `name` and wraps it; panics on invalid names. Test/bench helper.
    pub fn atom(name: &str) -> Self {
        Formula::Prop(Proposition::new(name).expect("valid proposition name"))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    /// `a -> b`, stored as `!a | b`.
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::not(a), b)
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Arc::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Arc::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Arc::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Arc::new(a), Arc::new(b))
    }

    pub fn release(a: Formula, b: Formula) -> Self {
        Formula::Release(Arc::new(a), Arc::new(b))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Formula::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Formula::False)
    }

    /// Number of nodes in the syntax tree.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => 1,
            Formula::Not(a)
            | Formula::Next(a)
            | Formula::Always(a)
            | Formula::Eventually(a) => 1 + a.node_count(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Every proposition mentioned anywhere in the formula.
    pub fn propositions(&self) -> BTreeSet<Proposition> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<Proposition>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Prop(p) => {
                out.insert(p.clone());
            }
            Formula::Not(a)
            | Formula::Next(a)
            | Formula::Always(a)
            | Formula::Eventually(a) => a.collect_props(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => 6,
            Formula::Not(_)
            | Formula::Next(_)
            | Formula::Always(_)
            | Formula::Eventually(_) => 5,
            Formula::Until(_, _) | Formula::Release(_, _) => 4,
            Formula::And(_, _) => 3,
            Formula::Or(_, _) => 2,
        }
    }

    fn fmt_child(
        &self,
        f: &mut fmt::Formatter<'_>,
        parent: u8,
        needs_parens_at_equal: bool,
    ) -> fmt::Result {
        let p = self.precedence();
        if p < parent || (p == parent && needs_parens_at_equal) {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    /// Surface syntax with minimal parentheses. `&` and `|` print
    /// left-associatively, `U`/`R` right-associatively, so the output
    /// reparses to a structurally equal tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Prop(p) => write!(f, "{p}"),
            Formula::Not(a) => {
                write!(f, "!")?;
                a.fmt_child(f, 5, false)
            }
            Formula::Next(a) => {
                write!(f, "X ")?;
                a.fmt_child(f, 5, false)
            }
            Formula::Always(a) => {
                write!(f, "G ")?;
                a.fmt_child(f, 5, false)
            }
            Formula::Eventually(a) => {
                write!(f, "F ")?;
                a.fmt_child(f, 5, false)
            }
            Formula::Until(a, b) => {
                a.fmt_child(f, 4, true)?;
                write!(f, " U ")?;
                b.fmt_child(f, 4, false)
            }
            Formula::Release(a, b) => {
                a.fmt_child(f, 4, true)?;
                write!(f, " R ")?;
                b.fmt_child(f, 4, false)
            }
            Formula::And(a, b) => {
                a.fmt_child(f, 3, false)?;
                write!(f, " & ")?;
                b.fmt_child(f, 3, true)
            }
            Formula::Or(a, b) => {
                a.fmt_child(f, 2, false)?;
                write!(f, " | ")?;
                b.fmt_child(f, 2, true)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}
