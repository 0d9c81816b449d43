use super::{Detail, Mechanism, Prediction, Verdict};
use crate::model::ExceptionSet;

fn rule(
    verdict: Verdict,
    mechanism: Mechanism,
    rule: &'static str,
    statement: String,
) -> Prediction {
    Prediction {
        verdict,
        mechanism,
        detail: Detail::Rule { rule, statement },
    }
}

fn table_rule(verdict: Verdict, name: &'static str, statement: String) -> Prediction {
    rule(verdict, Mechanism::TheoremTable, name, statement)
}

/// Start of the range where the consecutive-support rule applies.
pub fn consecutive_rule_start(r: u64) -> u64 {
    (r * (r - 1) * (3 * r - 1) + 4) / 2
}

/// Configurations whose eventual sign is known outright. Anything else is
/// `Unknown` and left to the criteria.
pub fn theorem_table(e: &ExceptionSet, n: u64) -> Prediction {
    let s = |m: u64| e.allows(m);

    if e.finite_support().as_deref() == Some(&[1, 3][..]) && n % 3 == 1 {
        return rule(
            Verdict::Zero,
            Mechanism::S13Identity,
            "s13-zero",
            format!("S = {{1,3}}: p(n−1) = p(n) = p(n+1), so Δ({n}) = 0 for every ℓ"),
        );
    }

    if s(2) && s(3) {
        if n >= 3 {
            match n % 3 {
                0 => {
                    return table_rule(
                        Verdict::EventuallyConcave,
                        "s123-mod3",
                        format!("1,2,3 ∈ S, n = {n} ≡ 0 (mod 3): Δ > 0 for large ℓ"),
                    )
                }
                1 => {
                    return table_rule(
                        Verdict::EventuallyConvex,
                        "s123-mod3",
                        format!("1,2,3 ∈ S, n = {n} ≡ 1 (mod 3): Δ < 0 for large ℓ"),
                    )
                }
                _ if !s(4) && n >= 5 => {
                    return table_rule(
                        Verdict::EventuallyConcave,
                        "s123-e4",
                        format!("1,2,3 ∈ S, 4 ∈ E, n = {n} ≡ 2 (mod 3): Δ > 0 for large ℓ"),
                    )
                }
                _ => {}
            }
        }
        return Prediction::unknown(format!(
            "1,2,3 ∈ S and n = {n}: no table entry, the answer depends on the weights"
        ));
    }

    if s(2) && !s(3) {
        if n >= 5 {
            let (verdict, parity) = if n.is_multiple_of(2) {
                (Verdict::EventuallyConcave, "even")
            } else {
                (Verdict::EventuallyConvex, "odd")
            };
            return table_rule(
                verdict,
                "s12-e3-parity",
                format!("1,2 ∈ S, 3 ∈ E, n = {n} {parity}: sign fixed by parity for large ℓ"),
            );
        }
        return Prediction::unknown(format!(
            "1,2 ∈ S, 3 ∈ E: parity rule starts at n = 5, got {n}"
        ));
    }

    if !s(2) && s(3) && !s(4) {
        if n >= 4 {
            match n % 3 {
                0 => {
                    return table_rule(
                        Verdict::EventuallyConcave,
                        "s13-e24-mod3",
                        format!("1,3 ∈ S, 2,4 ∈ E, n = {n} ≡ 0 (mod 3): Δ > 0 for large ℓ"),
                    )
                }
                2 => {
                    return table_rule(
                        Verdict::EventuallyConvex,
                        "s13-e24-mod3",
                        format!("1,3 ∈ S, 2,4 ∈ E, n = {n} ≡ 2 (mod 3): Δ < 0 for large ℓ"),
                    )
                }
                _ if s(5) => {
                    return table_rule(
                        Verdict::EventuallyConvex,
                        "s135-e24",
                        format!("1,3,5 ∈ S, 2,4 ∈ E, n = {n} ≡ 1 (mod 3): Δ < 0 for large ℓ"),
                    )
                }
                _ => {
                    return Prediction::unknown(format!(
                        "1,3 ∈ S, 2,4,5 ∈ E, n = {n} ≡ 1 (mod 3): open case"
                    ))
                }
            }
        }
        return Prediction::unknown(format!("1,3 ∈ S, 2,4 ∈ E: rules start at n = 4, got {n}"));
    }

    if let Some(r) = e.second_part() {
        if r >= 3 && s(r + 1) {
            let start = consecutive_rule_start(r);
            if n >= start {
                let (verdict, sign) = if n % r == r - 1 {
                    (Verdict::EventuallyConvex, "<")
                } else {
                    (Verdict::EventuallyConcave, ">")
                };
                return table_rule(
                    verdict,
                    "consecutive-support",
                    format!(
                        "1,{r},{} ∈ S, 2..{} ∈ E, n = {n} ≥ {start}, n ≡ {} (mod {r}): Δ {sign} 0 for large ℓ",
                        r + 1,
                        r - 1,
                        n % r
                    ),
                );
            }
            return Prediction::unknown(format!(
                "1,{r},{} ∈ S with 2..{} ∈ E: rule starts at n = {start}, got {n}",
                r + 1,
                r - 1
            ));
        }
    }

    Prediction::unknown("no table entry for this exception set")
}
