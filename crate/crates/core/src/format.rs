//! Line-based theory file format.
//!
//! ```text
//! # comment
//! p dt <nvars> <nrules>              optional header
//! w <clauses>                        one knowledge formula
//! r <clauses> : <clauses> : <clauses>  prerequisite : justification : conclusion
//! ```
//!
//! A clause is a run of nonzero signed variable ids closed by `0`; a bare
//! `0` is the empty clause and an empty section is the empty formula.

use crate::cnf::{Clause, Formula, Lit};
use crate::theory::{DefaultRule, DefaultTheory};
use crate::Error;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str, offset: usize) -> impl Iterator<Item = Token<'_>> {
    let mut start = None;
    let mut out = Vec::new();
    for (i, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: offset + s + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out.into_iter()
}

fn error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_formula(section: &str, offset: usize, line: usize) -> Result<Formula, Error> {
    let mut clauses = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut last_column = offset + 1;
    for token in tokens(section, offset) {
        last_column = token.column;
        let value: i64 = token
            .text
            .parse()
            .map_err(|_| error(line, token.column, format!("expected a literal, found `{}`", token.text)))?;
        if value == 0 {
            if token.text.starts_with(['-', '+']) {
                return Err(error(line, token.column, "variable id 0"));
            }
            clauses.push(Clause::new(pending.drain(..)));
        } else {
            let lit = Lit::from_dimacs(value)
                .ok_or_else(|| error(line, token.column, format!("variable id out of range: {value}")))?;
            pending.push(lit);
        }
    }
    if !pending.is_empty() {
        return Err(error(line, last_column, "unterminated clause (missing 0)"));
    }
    Ok(Formula::new(clauses))
}

/// Parses a theory; formulas and rules keep file order.
pub fn parse_theory(text: &str) -> Result<DefaultTheory, Error> {
    let mut theory = DefaultTheory::default();
    let mut header: Option<(usize, u64, usize)> = None;
    let mut seen_content = false;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.split('#').next().unwrap_or("");
        let body = line.trim_start();
        if body.trim().is_empty() {
            continue;
        }
        let indent = line.len() - body.len();
        let (keyword, rest) = body.split_at(body.find(char::is_whitespace).unwrap_or(body.len()));
        let rest_offset = indent + keyword.len();
        match keyword {
            "p" => {
                if header.is_some() || seen_content {
                    return Err(error(line_no, indent + 1, "header must come first and only once"));
                }
                let parts: Vec<Token> = tokens(rest, rest_offset).collect();
                let bad = || error(line_no, indent + 1, "expected `p dt <nvars> <nrules>`");
                if parts.len() != 3 || parts[0].text != "dt" {
                    return Err(bad());
                }
                let nvars = parts[1].text.parse().map_err(|_| bad())?;
                let nrules = parts[2].text.parse().map_err(|_| bad())?;
                header = Some((line_no, nvars, nrules));
            }
            "w" => {
                seen_content = true;
                theory.knowledge.push(parse_formula(rest, rest_offset, line_no)?);
            }
            "r" => {
                seen_content = true;
                let mut sections = Vec::new();
                let mut offset = rest_offset;
                for part in rest.split(':') {
                    sections.push((part, offset));
                    offset += part.len() + 1;
                }
                if sections.len() != 3 {
                    return Err(error(
                        line_no,
                        indent + 1,
                        format!("a rule needs 3 sections separated by `:`, found {}", sections.len()),
                    ));
                }
                let mut parsed = sections
                    .into_iter()
                    .map(|(s, o)| parse_formula(s, o, line_no))
                    .collect::<Result<Vec<_>, _>>()?;
                let conclusion = parsed.pop().unwrap();
                let justification = parsed.pop().unwrap();
                let prerequisite = parsed.pop().unwrap();
                theory
                    .rules
                    .push(DefaultRule::new(prerequisite, justification, conclusion));
            }
            other => {
                return Err(error(
                    line_no,
                    indent + 1,
                    format!("unknown line type `{other}` (expected p, w or r)"),
                ))
            }
        }
    }
    if let Some((line_no, nvars, nrules)) = header {
        if theory.rules.len() != nrules {
            return Err(error(
                line_no,
                1,
                format!("header declares {nrules} rules, found {}", theory.rules.len()),
            ));
        }
        if u64::from(theory.max_var()) > nvars {
            return Err(error(
                line_no,
                1,
                format!("header declares {nvars} variables, found id {}", theory.max_var()),
            ));
        }
    }
    Ok(theory)
}

fn render_formula(formula: &Formula) -> String {
    formula.to_string()
}

/// Normalized text form: header, knowledge lines, then rule lines.
pub fn render_theory(theory: &DefaultTheory) -> String {
    let mut out = format!("p dt {} {}\n", theory.max_var(), theory.rules.len());
    for w in &theory.knowledge {
        let body = render_formula(w);
        if body.is_empty() {
            out.push_str("w\n");
        } else {
            out.push_str(&format!("w {body}\n"));
        }
    }
    for rule in &theory.rules {
        out.push('r');
        for (i, part) in rule.formulas().into_iter().enumerate() {
            if i > 0 {
                out.push_str(" :");
            }
            let body = render_formula(part);
            if !body.is_empty() {
                out.push(' ');
                out.push_str(&body);
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(clauses: &[&[i64]]) -> Formula {
        Formula::from_dimacs(clauses)
    }

    #[test]
    fn parses_knowledge_line() {
        let t = parse_theory("w 1 0").unwrap();
        assert_eq!(t.knowledge, vec![f(&[&[1]])]);
        assert!(t.rules.is_empty());
    }

    #[test]
    fn parses_example_one_d2() {
        // x = 1, z = 2, y = 3
        let t = parse_theory("w 1 0\nr 1 0 : 2 0 : -3 0\nr 1 0 : 3 0 : -2 0").unwrap();
        assert_eq!(t.knowledge, vec![f(&[&[1]])]);
        assert_eq!(t.rules[0], DefaultRule::new(f(&[&[1]]), f(&[&[2]]), f(&[&[-3]])));
        assert_eq!(t.rules[1], DefaultRule::new(f(&[&[1]]), f(&[&[3]]), f(&[&[-2]])));
    }

    #[test]
    fn empty_sections_and_bare_zero() {
        let t = parse_theory("r : : 0").unwrap();
        assert_eq!(t.rules, vec![DefaultRule::new(Formula::top(), Formula::top(), Formula::bottom())]);
        let t = parse_theory("w\nw 0").unwrap();
        assert_eq!(t.knowledge, vec![Formula::top(), Formula::bottom()]);
    }

    #[test]
    fn comments_and_header() {
        let text = "# Example\np dt 3 1\nw 1 -2 0 3 0   # two clauses\n\nr 1 0 :: 2 0\n";
        let t = parse_theory(text).unwrap();
        assert_eq!(t.knowledge, vec![f(&[&[1, -2], &[3]])]);
        assert_eq!(t.rules[0].justification, Formula::top());
    }

    #[test]
    fn diagnostics() {
        let err = |s: &str| match parse_theory(s) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected parse error, got {other:?}"),
        };
        let (line, column, msg) = err("w 1 0\nw 1 2");
        assert_eq!((line, column), (2, 5));
        assert!(msg.contains("unterminated"));
        let (_, column, msg) = err("w 1 -0");
        assert_eq!(column, 5);
        assert!(msg.contains("id 0"));
        let (line, _, msg) = err("w 1 0\n\nr 1 0 : 2 0");
        assert_eq!(line, 3);
        assert!(msg.contains("3 sections"));
        let (_, column, _) = err("w 1 x 0");
        assert_eq!(column, 5);
        assert!(err("q 1 0").2.contains("unknown"));
        assert!(err("p dt 3 2\nr : : 0").2.contains("2 rules"));
        assert!(err("p dt 1 0\nw 2 0").2.contains("variables"));
        assert!(err("w 1 0\np dt 1 0").2.contains("header"));
    }

    #[test]
    fn render_normalizes() {
        let t = parse_theory("w 2 1 0 1 0\nr : : 0\nr 1 0 : 2 0 : -3 0\nw").unwrap();
        let text = render_theory(&t);
        assert_eq!(text, "p dt 3 2\nw 1 0 1 2 0\nw\nr : : 0\nr 1 0 : 2 0 : -3 0\n");
        assert_eq!(parse_theory(&text).unwrap(), t);
    }
}
