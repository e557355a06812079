//! Brute-force finite-trace semantics. This is the reference oracle that the
//! progression machinery is tested against; keep it direct and obviously
//! correct rather than fast.

use super::{Formula, LtlError, Trace};

/// Decides whether `trace` satisfies `phi` at position `i`.
///
/// Satisfaction of the temporal operators on a finite trace of last index `t`:
/// `X phi` requires `i < t`; `F` and `U` and `R` quantify their witness over
/// `[i, t]`; `G phi` holds iff some `j` in `[0, t]` has `phi` at every
/// position after `j` (vacuous at `j = t`, so `G` is decided weakly).
pub fn evaluate(trace: &Trace, i: usize, phi: &Formula) -> Result<bool, LtlError> {
    if i >= trace.len() {
        return Err(LtlError::IndexOutOfRange {
            index: i,
            len: trace.len(),
        });
    }
    Ok(eval_at(trace, i, phi))
}

fn eval_at(trace: &Trace, i: usize, phi: &Formula) -> bool {
    let t = trace.last_index();
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Prop(p) => trace.step(i).contains(p),
        Formula::Not(a) => !eval_at(trace, i, a),
        Formula::And(a, b) => eval_at(trace, i, a) && eval_at(trace, i, b),
        Formula::Or(a, b) => eval_at(trace, i, a) || eval_at(trace, i, b),
        Formula::Next(a) => i < t && eval_at(trace, i + 1, a),
        Formula::Always(a) => (0..=t).any(|j| (j + 1..=t).all(|k| eval_at(trace, k, a))),
        Formula::Eventually(a) => (i..=t).any(|j| eval_at(trace, j, a)),
        Formula::Until(a, b) => (i..=t).any(|j| {
            eval_at(trace, j, b) && (i..j).all(|k| eval_at(trace, k, a))
        }),
        Formula::Release(a, b) => {
            let strong = (i..=t).any(|j| {
                eval_at(trace, j, a) && (i..=j).all(|k| eval_at(trace, k, b))
            });
            strong || (i..=t).all(|k| eval_at(trace, k, b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, parse_label_set, Trace};
    use super::*;

    fn trace(labels: &[&str]) -> Trace {
        Trace::new(labels.iter().map(|l| parse_label_set(l).unwrap()).collect()).unwrap()
    }

    fn holds(labels: &[&str], i: usize, phi: &str) -> bool {
        evaluate(&trace(labels), i, &parse(phi).unwrap()).unwrap()
    }

    #[test]
    fn proposition_holds_iff_in_label_set() {
        assert!(holds(&["p"], 0, "p"));
        assert!(!holds(&[""], 0, "p"));
    }

    #[test]
    fn next_requires_a_following_step() {
        assert!(holds(&["", "p"], 0, "X p"));
        assert!(!holds(&["p"], 0, "X p"));
        assert!(!holds(&["", "p"], 1, "X p"));
    }

    #[test]
    fn eventually_needs_a_witness_within_the_trace() {
        assert!(!holds(&[""], 0, "F p"));
        assert!(holds(&["", "", "p"], 0, "F p"));
        // The witness must not be before the evaluation index.
        assert!(!holds(&["p", ""], 1, "F p"));
    }

    #[test]
    fn until_is_strong() {
        assert!(holds(&["p", "p", "q"], 0, "p U q"));
        assert!(!holds(&["p", "p"], 0, "p U q"));
        assert!(!holds(&["p", "", "q"], 0, "p U q"));
        // q at the very first step needs no p at all.
        assert!(holds(&["q"], 0, "p U q"));
    }

    #[test]
    fn release_is_weak_on_finite_traces() {
        // b all the way to the end satisfies a R b without a ever holding.
        assert!(holds(&["b", "b"], 0, "a R b"));
        assert!(holds(&["b", "a b", ""], 0, "a R b"));
        assert!(!holds(&["b", ""], 0, "a R b"));
        // a releasing at j requires b through j inclusive.
        assert!(!holds(&["b", "a", ""], 0, "a R b"));
    }

    #[test]
    fn always_is_vacuously_true_with_a_last_position_witness() {
        // The exists-forall clause admits j = t, so G never fails outright.
        assert!(holds(&[""], 0, "G p"));
        assert!(holds(&["", ""], 0, "G p"));
    }

    #[test]
    fn index_out_of_range_is_an_error() {
        let tr = trace(&["p"]);
        assert!(evaluate(&tr, 1, &parse("p").unwrap()).is_err());
    }
}
