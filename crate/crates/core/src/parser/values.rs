use crate::diagnostic::{Diagnostic, Diagnostics, SourceSpan};
use crate::linarith::rational::{format_rational, parse_rational};
use crate::linarith::{ParameterValuation, Rational, VariableRegistry};
use crate::model::RectangleV0;

/// `name = value` entries separated by `&` or newlines.
fn entries(text: &str) -> Vec<(String, String, SourceSpan)> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = match line.find("--") {
            Some(i) => &line[..i],
            None => line,
        };
        let mut col = 0;
        for piece in line.split('&') {
            let start = col + piece.len() - piece.trim_start().len();
            let trimmed = piece.trim();
            col += piece.len() + 1;
            if trimmed.is_empty() {
                continue;
            }
            let span = SourceSpan::new(line_no + 1, start + 1, start + 1 + trimmed.len());
            match trimmed.split_once('=') {
                Some((name, value)) => {
                    out.push((name.trim().to_string(), value.trim().to_string(), span))
                }
                None => out.push((trimmed.to_string(), String::new(), span)),
            }
        }
    }
    out
}

fn collect<T: Clone>(
    text: &str,
    registry: &VariableRegistry,
    mut value: impl FnMut(&str, &str, &SourceSpan) -> Result<T, Diagnostic>,
) -> Result<Vec<T>, Diagnostics> {
    let params = registry.parameters();
    let mut slots: Vec<Option<T>> = vec![None; params.len()];
    let mut mentioned = vec![false; params.len()];
    let mut diags = Vec::new();
    for (name, raw, span) in entries(text) {
        if raw.is_empty() {
            diags.push(Diagnostic::at(
                span,
                format!("expected `name = value`, found `{name}`"),
            ));
            continue;
        }
        let Some(index) = params.iter().position(|p| *p == name) else {
            diags.push(Diagnostic::at(span, format!("unknown parameter `{name}`")));
            continue;
        };
        if mentioned[index] {
            diags.push(Diagnostic::at(span, format!("`{name}` given twice")));
            continue;
        }
        mentioned[index] = true;
        match value(&name, &raw, &span) {
            Ok(v) => slots[index] = Some(v),
            Err(d) => diags.push(d),
        }
    }
    let end = SourceSpan::new(text.lines().count().max(1), 1, 1);
    for (name, seen) in params.iter().zip(&mentioned) {
        if !seen {
            diags.push(Diagnostic::at(end.clone(), format!("{name} missing")));
        }
    }
    if diags.is_empty() {
        Ok(slots.into_iter().map(Option::unwrap).collect())
    } else {
        Err(Diagnostics(diags))
    }
}

fn rational(raw: &str, span: &SourceSpan) -> Result<Rational, Diagnostic> {
    parse_rational(raw)
        .ok_or_else(|| Diagnostic::at(span.clone(), format!("`{raw}` is not a rational number")))
}

/// Reference valuation file: `p1 = 1 & p2 = 2/3`.
pub fn parse_pi0(
    text: &str,
    registry: &VariableRegistry,
) -> Result<ParameterValuation, Diagnostics> {
    collect(text, registry, |_, raw, span| rational(raw, span)).map(ParameterValuation)
}

/// Rectangle file: `p1 = 0..2 & p2 = 1/2..3`.
pub fn parse_v0(text: &str, registry: &VariableRegistry) -> Result<RectangleV0, Diagnostics> {
    let bounds = collect(text, registry, |name, raw, span| {
        let Some((lo, hi)) = raw.split_once("..") else {
            return Err(Diagnostic::at(
                span.clone(),
                format!("expected `lo..hi` for {name}"),
            ));
        };
        let (lo, hi) = (rational(lo, span)?, rational(hi, span)?);
        if lo > hi {
            return Err(Diagnostic::at(
                span.clone(),
                format!(
                    "empty interval for {name} ({}..{})",
                    format_rational(&lo),
                    format_rational(&hi)
                ),
            ));
        }
        Ok((lo, hi))
    })?;
    Ok(RectangleV0::new(bounds).expect("bounds checked"))
}
