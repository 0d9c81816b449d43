use super::delta::{classify_delta_branch, delta_configuration, DeltaBranchReport};
use super::{
    signum_rational, ARatio, ClassifyOptions, Detail, Hypotheses, Mechanism, Prediction, QValue,
    Relation, Verdict,
};
use crate::error::{Error, Result};
use crate::exact::ratio;
use crate::maxprod::{max_product, max_products_upto};
use crate::model::ExceptionSet;

/// `Q_E(n) = M_E(n)² / (M_E(n−1)·M_E(n+1))` for `n ≥ 1`.
pub fn q_value(e: &ExceptionSet, n: u64) -> QValue {
    assert!(n >= 1, "Q_E(n) needs n ≥ 1");
    let m = max_products_upto(e, n + 1);
    let i = n as usize;
    let q = ratio(&(&m[i] * &m[i]), &(&m[i - 1] * &m[i + 1]));
    let relation = signum_rational(&q);
    QValue { n, q, relation }
}

/// `Q > 1` ⇒ eventually concave, `Q < 1` ⇒ eventually convex, else unknown.
pub fn classify_basic(e: &ExceptionSet, n: u64) -> Prediction {
    let q = q_value(e, n);
    let verdict = match q.relation {
        Relation::GreaterThanOne => Verdict::EventuallyConcave,
        Relation::LessThanOne => Verdict::EventuallyConvex,
        Relation::EqualOne => Verdict::Unknown,
    };
    let mechanism = if verdict == Verdict::Unknown {
        Mechanism::None
    } else {
        Mechanism::QCriterion
    };
    Prediction {
        verdict,
        mechanism,
        detail: Detail::Q(q),
    }
}

/// `A(n)²/(A(n−1)·A(n+1))` together with the hypothesis record.
pub fn a_ratio(e: &ExceptionSet, n: u64, guard: u64) -> ARatio {
    assert!(n >= 1, "A-ratio needs n ≥ 1");
    let prev = max_product(e, n - 1);
    let here = max_product(e, n);
    let next = max_product(e, n + 1);

    let lo = (n - 1).saturating_sub(guard).max(2);
    let hi = n + 1;
    let m = max_products_upto(e, hi);
    let strict_growth = (lo..=hi).all(|k| m[k as usize] > m[k as usize - 1]);

    let balanced = match (
        prev.unique_maximizer(),
        here.unique_maximizer(),
        next.unique_maximizer(),
    ) {
        (Some(y), Some(x), Some(z)) => Some(x.union(x) == y.union(z)),
        _ => None,
    };
    let hypotheses = Hypotheses {
        strict_growth,
        growth_window: (lo, hi),
        unique_prev: prev.unique,
        unique_here: here.unique,
        unique_next: next.unique,
        balanced,
    };
    let ratio = &here.a * &here.a / (&prev.a * &next.a);
    ARatio {
        n,
        ratio,
        hypotheses,
    }
}

/// The composition-count criterion, applicable only where `Q_E(n) = 1`.
pub fn classify_refined(e: &ExceptionSet, n: u64, opts: &ClassifyOptions) -> Result<Prediction> {
    let q = q_value(e, n);
    if q.relation != Relation::EqualOne {
        return Err(Error::Contract(format!(
            "refined criterion needs Q_E({n}) = 1, got {}",
            q.q
        )));
    }
    let ar = a_ratio(e, n, opts.guard);
    let h = &ar.hypotheses;

    if h.strict_growth
        && !h.unique_prev
        && h.unique_here
        && h.unique_next
        && delta_configuration(e, n)
    {
        return match &opts.probe {
            Some(probe) => classify_delta_branch(e, n, &probe.weights, probe.ells.clone()),
            None => Ok(Prediction {
                verdict: Verdict::Conditional,
                mechanism: Mechanism::DeltaBranch,
                detail: Detail::Delta(DeltaBranchReport::unprobed(n)),
            }),
        };
    }

    if !h.all_hold() {
        return Ok(Prediction {
            verdict: Verdict::Unknown,
            mechanism: Mechanism::None,
            detail: Detail::A(ar),
        });
    }
    let verdict = match signum_rational(&ar.ratio) {
        Relation::GreaterThanOne => Verdict::EventuallyConcave,
        Relation::LessThanOne => Verdict::EventuallyConvex,
        Relation::EqualOne => Verdict::Unknown,
    };
    let mechanism = if verdict == Verdict::Unknown {
        Mechanism::None
    } else {
        Mechanism::ACriterion
    };
    Ok(Prediction {
        verdict,
        mechanism,
        detail: Detail::A(ar),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn set(s: &str) -> ExceptionSet {
        s.parse().unwrap()
    }

    fn frac(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn q_examples() {
        for n in [6, 9, 30] {
            assert_eq!(q_value(&ExceptionSet::empty(), n).q, frac(9, 8));
        }
        for n in [4, 8, 40] {
            assert_eq!(q_value(&set("3,5"), n).q, frac(2, 1));
        }
        let s13 = ExceptionSet::with_finite_support(&[1, 3]).unwrap();
        for n in [4, 7, 31] {
            let q = q_value(&s13, n);
            assert_eq!(q.q, frac(1, 1));
            assert_eq!(q.relation, Relation::EqualOne);
        }
    }

    #[test]
    fn basic_examples() {
        let e = set("2,4");
        let p = classify_basic(&e, 9);
        assert_eq!(p.verdict, Verdict::EventuallyConcave);
        assert!(matches!(&p.detail, Detail::Q(q) if q.q == frac(9, 5)));
        let p = classify_basic(&e, 10);
        assert_eq!(p.verdict, Verdict::EventuallyConvex);
        assert!(matches!(&p.detail, Detail::Q(q) if q.q == frac(3, 5)));
        let s13 = ExceptionSet::with_finite_support(&[1, 3]).unwrap();
        let p = classify_basic(&s13, 10);
        assert_eq!(p.verdict, Verdict::Unknown);
        assert_eq!(p.mechanism, Mechanism::None);
    }

    #[test]
    fn refined_four_excluded() {
        let e = set("4");
        for n in (5..=35).step_by(3) {
            let p = classify_refined(&e, n, &ClassifyOptions::default()).unwrap();
            assert_eq!(p.verdict, Verdict::EventuallyConcave, "n={n}");
            let Detail::A(ar) = &p.detail else { panic!() };
            assert_eq!(ar.ratio, frac(2 * (n as i64 + 1), n as i64 - 2));
        }
    }

    #[test]
    fn refined_consecutive() {
        // 1, r, r+1 ∈ S with 2..r−1 excluded.
        for (spec, r) in [("2", 3u64), ("2,3", 4), ("2,3,4", 5)] {
            let e = set(spec);
            let start = crate::maxprod::consecutive_threshold(r) + 2;
            for n in start..start + 3 * r {
                let j = n % r;
                if j == 0 || j == r - 1 {
                    continue;
                }
                let p = classify_refined(&e, n, &ClassifyOptions::default()).unwrap();
                assert_eq!(p.verdict, Verdict::EventuallyConcave, "{spec} n={n}");
                let Detail::A(ar) = &p.detail else { panic!() };
                let (j, r, n) = (j as i64, r as i64, n as i64);
                let want = frac(j + 1, j) * frac(n - j * (r + 1) + r, n - j * (r + 1));
                assert_eq!(ar.ratio, want, "{spec} n={n}");
            }
        }
    }

    #[test]
    fn refined_s13_fails_growth() {
        let s13 = ExceptionSet::with_finite_support(&[1, 3]).unwrap();
        let p = classify_refined(&s13, 10, &ClassifyOptions::default()).unwrap();
        assert_eq!(p.verdict, Verdict::Unknown);
        let Detail::A(ar) = &p.detail else { panic!() };
        assert!(!ar.hypotheses.strict_growth);
    }

    #[test]
    fn refined_rejects_q_not_one() {
        assert!(matches!(
            classify_refined(&set("2,4"), 9, &ClassifyOptions::default()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn refined_delegates_without_probe() {
        let p = classify_refined(&ExceptionSet::empty(), 11, &ClassifyOptions::default()).unwrap();
        assert_eq!(p.verdict, Verdict::Conditional);
        assert_eq!(p.mechanism, Mechanism::DeltaBranch);
    }
}
