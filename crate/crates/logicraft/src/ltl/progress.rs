//! Formula progression: rewriting a formula against one label set so the
//! residual expresses exactly the remaining obligation.

use std::collections::BTreeSet;

use super::{Formula, LabelSet, Proposition, Trace};

/// Knobs for the progression rules.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProgressOptions {
    /// Progress `G phi` to `true` instead of `prog(phi) & G phi`.
    pub paper_literal_always: bool,
}

/// Progresses `phi` through the label set `sigma` and simplifies the result.
pub fn progress(sigma: &LabelSet, phi: &Formula, opts: ProgressOptions) -> Formula {
    simplify(&prog_raw(sigma, phi, opts))
}

fn prog_raw(sigma: &LabelSet, phi: &Formula, opts: ProgressOptions) -> Formula {
    match phi {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Prop(p) => {
            if sigma.contains(p) {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Not(a) => Formula::not(prog_raw(sigma, a, opts)),
        Formula::And(a, b) => {
            Formula::and(prog_raw(sigma, a, opts), prog_raw(sigma, b, opts))
        }
        Formula::Or(a, b) => Formula::or(prog_raw(sigma, a, opts), prog_raw(sigma, b, opts)),
        Formula::Next(a) => (**a).clone(),
        Formula::Always(a) => {
            if opts.paper_literal_always {
                Formula::True
            } else {
                Formula::and(prog_raw(sigma, a, opts), phi.clone())
            }
        }
        Formula::Eventually(a) => Formula::or(prog_raw(sigma, a, opts), phi.clone()),
        Formula::Until(a, b) => Formula::or(
            prog_raw(sigma, b, opts),
            Formula::and(prog_raw(sigma, a, opts), phi.clone()),
        ),
        Formula::Release(a, b) => Formula::and(
            prog_raw(sigma, b, opts),
            Formula::or(prog_raw(sigma, a, opts), phi.clone()),
        ),
    }
}

/// Applies constant folding, double-negation elimination, and idempotence of
/// `&`/`|` on structurally equal children, bottom-up. The result is
/// trace-equivalent to the input.
pub fn simplify(phi: &Formula) -> Formula {
    match phi {
        Formula::True | Formula::False | Formula::Prop(_) => phi.clone(),
        Formula::Not(a) => s_not(simplify(a)),
        Formula::And(a, b) => s_and(simplify(a), simplify(b)),
        Formula::Or(a, b) => s_or(simplify(a), simplify(b)),
        Formula::Next(a) => Formula::next(simplify(a)),
        Formula::Always(a) => Formula::always(simplify(a)),
        Formula::Eventually(a) => Formula::eventually(simplify(a)),
        Formula::Until(a, b) => s_until(simplify(a), simplify(b)),
        Formula::Release(a, b) => s_release(simplify(a), simplify(b)),
    }
}

fn s_not(a: Formula) -> Formula {
    match a {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Not(inner) => (*inner).clone(),
        other => Formula::not(other),
    }
}

fn s_and(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::False, _) | (_, Formula::False) => Formula::False,
        (Formula::True, _) => b,
        (_, Formula::True) => a,
        _ if a == b => a,
        _ => Formula::and(a, b),
    }
}

fn s_or(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (Formula::True, _) | (_, Formula::True) => Formula::True,
        (Formula::False, _) => b,
        (_, Formula::False) => a,
        _ if a == b => a,
        _ => Formula::or(a, b),
    }
}

fn s_until(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        // A witness for `true` is available immediately.
        (_, Formula::True) => Formula::True,
        (_, Formula::False) => Formula::False,
        // `false U b` can only be discharged right now.
        (Formula::False, _) => b,
        _ => Formula::until(a, b),
    }
}

fn s_release(a: Formula, b: Formula) -> Formula {
    match (&a, &b) {
        (_, Formula::True) => Formula::True,
        (_, Formula::False) => Formula::False,
        // `true R b` releases at the current step.
        (Formula::True, _) => b,
        _ => Formula::release(a, b),
    }
}

/// Outcome of folding progression over a whole trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Satisfaction {
    /// The running formula became `true` at `step` (first such step).
    Satisfied { step: usize },
    /// The running formula became `false` at `step` (first such step).
    Falsified { step: usize },
    /// The trace ended with the obligation still pending.
    Open { residual: Formula },
}

impl Satisfaction {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Satisfaction::Satisfied { .. })
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, Satisfaction::Falsified { .. })
    }
}

/// Progresses `phi` through every step of `trace` in order and reports how
/// the obligation resolved.
pub fn satisfaction_by_progression(
    trace: &Trace,
    phi: &Formula,
    opts: ProgressOptions,
) -> Satisfaction {
    let mut current = phi.clone();
    for (step, sigma) in trace.steps().iter().enumerate() {
        current = progress(sigma, &current, opts);
        match current {
            Formula::True => return Satisfaction::Satisfied { step },
            Formula::False => return Satisfaction::Falsified { step },
            _ => {}
        }
    }
    Satisfaction::Open { residual: current }
}

/// Propositions occurring positively (under an even number of negations).
/// These are the candidate subgoals of the formula.
pub fn goal_propositions(phi: &Formula) -> BTreeSet<Proposition> {
    fn walk(phi: &Formula, positive: bool, out: &mut BTreeSet<Proposition>) {
        match phi {
            Formula::True | Formula::False => {}
            Formula::Prop(p) => {
                if positive {
                    out.insert(p.clone());
                }
            }
            Formula::Not(a) => walk(a, !positive, out),
            Formula::Next(a) | Formula::Always(a) | Formula::Eventually(a) => {
                walk(a, positive, out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => {
                walk(a, positive, out);
                walk(b, positive, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(phi, true, &mut out);
    out
}
