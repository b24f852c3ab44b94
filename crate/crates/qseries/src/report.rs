//! Stable rendering of verification reports: a versioned JSON schema
//! and a fixed-width text table.
//!
//! The JSON writer emits fields in a fixed order with hand-built
//! formatting, so identical reports serialize to identical bytes;
//! coefficients are decimal strings (arbitrary precision), exponents
//! appear in whole-q units where integral and as `k/2` otherwise, and
//! the mismatch record carries its exponent in twice-units to stay an
//! integer.  `ms_elapsed` is wall-clock and thus the only field that
//! varies across identical runs.

use std::fmt::Write;

use crate::identities::Report;
use crate::series::{HalfExp, Series};

/// Whole-q units when integral (`12`), else halves (`25/2`): the
/// external exponent convention.
fn exponent_label(e: HalfExp) -> String {
    e.to_string()
}

/// `order` as a bare JSON number in whole-q units, or a `k/2` string
/// for half-integral orders (unreachable from the CLI, which takes
/// whole orders, but kept total).
fn order_json(e: HalfExp) -> String {
    if e.twice() % 2 == 0 {
        format!("{}", e.twice() / 2)
    } else {
        format!("\"{}/2\"", e.twice())
    }
}

fn coeff_array(s: &Series) -> String {
    let mut out = String::from("[");
    for (t, c) in s.coeffs().iter().enumerate() {
        if t > 0 {
            out.push(',');
        }
        let _ = write!(out, "\"{c}\"");
    }
    out.push(']');
    out
}

/// One report as a single-line JSON object with the versioned schema.
pub fn report_to_json(r: &Report) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\"schema\":1,\"family\":{},\"variant\":{},\"m\":{},\"n\":{},\"kappa\":{},\"n_prime\":{},\"order\":{}",
        r.spec.family(),
        r.spec.variant(),
        r.spec.m(),
        r.spec.n(),
        r.spec.kappa(),
        r.spec.n_prime(),
        order_json(r.order),
    );
    let _ = write!(out, ",\"lhs\":{}", coeff_array(&r.lhs));
    let _ = write!(out, ",\"rhs_form1\":{}", coeff_array(&r.rhs_form1));
    match &r.rhs_form2 {
        Some(s) => {
            let _ = write!(out, ",\"rhs_form2\":{}", coeff_array(s));
        }
        None => out.push_str(",\"rhs_form2\":null"),
    }
    let _ = write!(out, ",\"equal\":{}", r.equal);
    match &r.first_mismatch {
        Some(mm) => {
            let _ = write!(
                out,
                ",\"first_mismatch\":{{\"exponent_times_two\":{},\"lhs\":\"{}\",\"rhs\":\"{}\"}}",
                mm.exponent.twice(),
                mm.lhs,
                mm.rhs
            );
        }
        None => out.push_str(",\"first_mismatch\":null"),
    }
    let _ = write!(
        out,
        ",\"terms_enumerated\":{},\"ms_elapsed\":{}}}",
        r.terms_enumerated, r.ms_elapsed
    );
    out
}

/// A batch of reports as a JSON array, one report per line, preserving
/// the input order.
pub fn reports_to_json(reports: &[Report]) -> String {
    let mut out = String::from("[\n");
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push_str(",\n");
        }
        out.push_str(&report_to_json(r));
    }
    out.push_str("\n]");
    out
}

/// One report as a fixed-width coefficient table plus a verdict line.
pub fn report_to_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}  kappa={}  n'={}  order={}",
        r.spec,
        r.spec.kappa(),
        r.spec.n_prime(),
        exponent_label(r.order),
    );

    let mut columns: Vec<(&str, &Series)> = vec![("lhs", &r.lhs), ("rhs_form1", &r.rhs_form1)];
    if let Some(s) = &r.rhs_form2 {
        columns.push(("rhs_form2", s));
    }
    let exp_width = (0..=r.order.twice())
        .map(|t| exponent_label(HalfExp::from_twice(t)).len())
        .max()
        .unwrap_or(1)
        .max(3);
    let widths: Vec<usize> = columns
        .iter()
        .map(|(name, s)| {
            s.coeffs()
                .iter()
                .map(|c| c.to_string().len())
                .max()
                .unwrap_or(1)
                .max(name.len())
        })
        .collect();

    let _ = write!(out, "{:>exp_width$}", "q^e");
    for ((name, _), w) in columns.iter().zip(&widths) {
        let _ = write!(out, "  {name:>w$}");
    }
    out.push('\n');
    for t in 0..=r.order.twice() {
        let _ = write!(out, "{:>exp_width$}", exponent_label(HalfExp::from_twice(t)));
        for ((_, s), w) in columns.iter().zip(&widths) {
            let _ = write!(out, "  {:>w$}", s.coeffs()[t as usize].to_string());
        }
        out.push('\n');
    }

    match &r.first_mismatch {
        None => {
            let _ = writeln!(
                out,
                "verdict: equal through order {} ({} terms, {} ms)",
                exponent_label(r.order),
                r.terms_enumerated,
                r.ms_elapsed
            );
        }
        Some(mm) => {
            let _ = writeln!(
                out,
                "verdict: MISMATCH at q^{} (lhs {}, rhs {}; {} terms, {} ms)",
                exponent_label(mm.exponent),
                mm.lhs,
                mm.rhs,
                r.terms_enumerated,
                r.ms_elapsed
            );
        }
    }
    out
}

/// A batch of reports as one verdict line per cell plus a summary.
pub fn reports_to_text(reports: &[Report]) -> String {
    let mut out = String::new();
    let mut equal = 0usize;
    for r in reports {
        let verdict = match &r.first_mismatch {
            None => {
                equal += 1;
                "equal".to_string()
            }
            Some(mm) => format!("MISMATCH at q^{}", exponent_label(mm.exponent)),
        };
        let _ = writeln!(
            out,
            "{}  order={}: {} ({} terms, {} ms)",
            r.spec,
            exponent_label(r.order),
            verdict,
            r.terms_enumerated,
            r.ms_elapsed
        );
    }
    let _ = writeln!(out, "{equal}/{} cells equal", reports.len());
    out
}
